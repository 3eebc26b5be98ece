#pragma once
// Cheater-side modeling: the four-unitary interception strategy, its effective
// (generally sub-unitary) transfer matrix, spoofing fidelity against the
// honest output, derivative-free strategy optimization, and the closed-form
// interception/forgery error bounds.

#include <array>
#include <cstdint>
#include <vector>

#include "qrs/core.hpp"

namespace qrs {

// The two cheaters' operations: p and q act on the intercepted rail modes at
// the cheaters' positions, v and w on the returning modes.
struct AttackStrategy {
  Unitary2 v{1.0, 0.0, 0.0, 1.0};
  Unitary2 w{1.0, 0.0, 0.0, 1.0};
  Unitary2 p{1.0, 0.0, 0.0, 1.0};
  Unitary2 q{1.0, 0.0, 0.0, 1.0};
};

// The 2x2 transfer matrix the verifiers effectively see instead of the honest
// unitary.  Column norms are <= 1; both columns reach norm 1 only when the
// strategy degenerates to a pure phase or a swap-with-phase, which is exactly
// the family the no-combiner exclusion rounds are designed to catch.
struct EffectiveU {
  Mat2 m;
};

EffectiveU effective_u(const AttackStrategy& strategy);

// |<honest output at y_est | spoofed output at y_fake>|^2 for a single probe.
double attack_fidelity(const Unitary2& u, const AttackStrategy& strategy,
                       const ProbeSpec& probe, double y_est, double y_fake);

// Weighted average of attack_fidelity over an ensemble (the optimizer's
// objective).
double ensemble_attack_fidelity(const Unitary2& u,
                                const AttackStrategy& strategy,
                                const Ensemble& ensemble, double y_est,
                                double y_fake);

// Squared norm of the spoofed state: the probability that all N photons
// survive the strategy in one round.
double survival_probability(const Mat2& u_prime, const ProbeSpec& probe,
                            double y_fake);

// Probabilities that all N photons exit on one rail when the verifiers skip
// their combiner and project directly onto the rails.  Pure-phase and
// swap-with-phase transfer matrices put everything on one side, so these feed
// the exclusion test in the detection layer.
struct OneSidePattern {
  double all_left;
  double all_right;
};
OneSidePattern one_side_probabilities(const Mat2& transfer,
                                      const ProbeSpec& probe, double y);

// Do-nothing strategy (all four operations identity).
AttackStrategy make_identity_strategy();
// Swap strategy: reproduces the pure-mirror transform exactly.
AttackStrategy make_mirror_strategy();
// Reproduces column `column` of u exactly and annihilates the other input
// rail; the strongest known interception against a one-sided probe.
AttackStrategy make_half_mimic_strategy(const Unitary2& u, int column = 0);

// Full U(2) parameterization by 4 angles:
//   e^{ia} [[e^{ib} cos t, e^{ig} sin t], [-e^{-ig} sin t, e^{-ib} cos t]].
Unitary2 u2_from_angles(double a, double b, double t, double g);
// Inverse map (up to parameter redundancy): reconstructs u to 1e-9 entrywise.
std::array<double, 4> angles_from_unitary(const Unitary2& u);

inline constexpr std::uint64_t kDefaultOptimizerSeed = 0x5eed0a77ac4ull;

struct OptimizeResult {
  AttackStrategy strategy;
  double fidelity = 0.0;  // ensemble-averaged, at the returned strategy
  bool converged = false; // some restart hit simplex collapse before budget
  int best_restart = -1;  // which restart won; ties resolved to the lowest index
};

// Maximize ensemble_attack_fidelity over the 16 strategy angles with a
// restarted Nelder-Mead simplex.  budget = objective evaluations per restart;
// each restart owns a seed derived from (seed, restart index), warm restarts
// start from the known constructions (mirror, both half-mimics, identity).
// For fixed seed the evaluation sequence at a larger budget extends the
// smaller one, so the result is monotone non-decreasing in budget.
OptimizeResult optimize_attack(const Unitary2& u, const Ensemble& ensemble,
                               double y_est, double y_fake, int budget,
                               std::uint64_t seed = kDefaultOptimizerSeed,
                               int restarts = 32);

// Interception bound: sum_i p_i max(|psi_il|^2, |psi_ir|^2).
double p1_upper_bound(const Ensemble& ensemble);
// Forgery upper bound: sqrt(sum_ij p_i p_j |<psi_i|psi_j>|).
double p2_upper_bound(const Ensemble& ensemble);
// Forgery lower bound from the plain-mixture forgery, via the pure-state
// trace-distance closed form 2 sqrt(1 - |<psi_i|psi_j>|^2).
double p2_lower_bound(const Ensemble& ensemble);
// Best possible forgery acceptance against the fidelity measurement: the top
// eigenvalue of the weighted Gram matrix sqrt(p_i p_j) <phi_i|phi_j> of the
// honest outputs at y_est.  Ensemble size capped at 16.
double p2_optimal_forgery(const Ensemble& ensemble, const Unitary2& u,
                          double y_est);

struct BoundReport {
  double p1_upper;
  double p2_upper;
  double p2_lower;
  double p2_exact_for_measurement;
};

// Assembles all four quantities and enforces the chain
// 0 <= p2_lower <= p2_exact <= p2_upper <= 1.
BoundReport bound_report(const Ensemble& ensemble, const Unitary2& u,
                         double y_est);

}  // namespace qrs
