#pragma once
// Verifier-side Monte Carlo: the reduced (port, position-sum) sampling model,
// kernel density estimation with the M^{-1/5} bandwidth rule, total-variation
// statistics, the two-step cheater-detection trial, and the concentration
// exponents that bound its error probabilities.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qrs/attack.hpp"
#include "qrs/core.hpp"
#include "qrs/metrology.hpp"
#include "qrs/rng.hpp"

namespace qrs {

// One challenge outcome after the sigma -> 0 reduction: which output port all
// N photons landed on, and the centered photon-position sum.
struct MeasurementSample {
  int port = 0;  // 0 or 1
  double r = 0.0;
};

// Gaussian-kernel density estimate.  The default build rule ties the
// bandwidth to the sample count as h = M^{-1/5}; the explicit-bandwidth
// constructor exists for the per-port buckets inside detection trials.
class KdeEstimate {
 public:
  explicit KdeEstimate(std::vector<double> samples);  // M >= 2, h = M^{-1/5}
  KdeEstimate(std::vector<double> samples, double bandwidth);

  double pdf(double x) const;
  double bandwidth() const { return h_; }
  std::size_t size() const { return sorted_.size(); }
  double min_sample() const { return sorted_.front(); }
  double max_sample() const { return sorted_.back(); }

 private:
  std::vector<double> sorted_;
  double h_;
};

// Builds the estimate from raw samples with the bandwidth rule h = M^{-1/5}
// (the rate the concentration bound is calibrated for). Requires M >= 2.
KdeEstimate kde_build(std::vector<double> samples);

// Integration window for tv_distance; must cover >= 8 sd of both densities
// (checked: each density must integrate to >= 1 - 1e-4 over the window).
struct IntegrationGrid {
  double lo;
  double hi;
};

// (1/2) integral |f - g| by adaptive Simpson quadrature, absolute tolerance
// 1e-5.  Throws std::invalid_argument if the window misses > 1e-4 of either
// density's mass.
double tv_distance(const std::function<double(double)>& f,
                   const std::function<double(double)>& g,
                   const IntegrationGrid& grid);

// One honest sample of the reduced model: port 0 with probability |psi_l|^2
// and r ~ Normal(-N y, 1/(sqrt2 beta)); port 1 with probability |psi_r|^2 and
// r ~ Normal(+N y, 1/(sqrt2 beta)).  Derived for the balanced probe combiner
// with the conjugate (here: equal) detector combiner; exact at y = 0 for all
// probes and at all y for one-sided probes, and validated against the
// brute-force density and the Fisher-information check.
MeasurementSample sample_honest(const ProbeSpec& probe, double y, Rng& rng);
// Overload that checks the combiner configuration explicitly and rejects
// anything but detector = conj(probe combiner) = balanced.
MeasurementSample sample_honest(const Unitary2& detector_combiner,
                                const Unitary2& probe_combiner,
                                const ProbeSpec& probe, double y, Rng& rng);

// Monte Carlo Fisher information of the reduced measurement via the score
// function (squared d/dy log-likelihood averaged over sample_honest draws).
// Returns the estimate with its standard error; expected value 2 beta^2 N^2
// per copy.
QfiResult fi_monte_carlo_score(const ProbeSpec& probe, double y, int samples,
                               Rng& rng);

// A fixed (port, r) outcome density: port weights w, per-port Gaussian means
// mu, shared sd.  Covers the honest distributions, their mixtures, and
// forged-state distributions.
struct PortDensity {
  double w[2];
  double mu[2];
  double sd;

  double pdf(int port, double r) const;
  MeasurementSample sample(Rng& rng) const;
};

// The reduced honest outcome density of one probe at offset y.
PortDensity honest_port_density(const ProbeSpec& probe, double y);
// The weight-averaged ensemble mixture at y (the default forgery target).
PortDensity mixture_port_density(const Ensemble& ensemble, double y);

// TV between the two honest outcome densities of a two-state ensemble at
// y_est, integrated per port by adaptive quadrature.
double tv_q1_q2(const Ensemble& ensemble, double y_est);

// What the party under test actually does with each challenge.
struct Scenario {
  enum class Kind { honest, attack_on_state, forge };
  Kind kind = Kind::honest;
  std::optional<AttackStrategy> strategy;  // attack_on_state
  std::optional<PortDensity> q0;           // forge

  static Scenario honest();
  static Scenario attack(const AttackStrategy& strategy);
  static Scenario forge(const PortDensity& q0);
};

struct DetectionVerdict {
  bool step1_pass = false;  // every photon of every round arrived, and the
                            // no-combiner exclusion rounds saw both rails
  double tv_stat = 0.0;     // exact product-TV statistic (0 if step 1 failed)
  double threshold = 0.0;
  bool cheater_flag = false;  // == !step1_pass || tv_stat > threshold
  double tv_decomposition = 0.0;  // diagnostic: TV(Q1,P1) + TV(Q2,P2) >= tv_stat
};

// One protocol run: m_samples challenges split evenly between the two
// ensemble states (even rounds state 0, odd rounds state 1), plus
// ceil(exclusion_overhead * m_samples) no-combiner exclusion rounds.  Step 1
// fails if any round loses a photon or the exclusion rounds never see photons
// on both rails.  Step 2 builds per-(state, port) KDE buckets from the main
// rounds (bucket bandwidth = count^{-1/5}, singleton buckets h = 1) and
// compares the product of the two estimated densities against Q_1 x Q_2 at
// geometry.y_est by direct 2D quadrature.
DetectionVerdict run_detection_trial(const Ensemble& ensemble,
                                     const Scenario& scenario, int m_samples,
                                     double epsilon, const Geometry& geometry,
                                     Rng& rng,
                                     double exclusion_overhead = 0.1);

// Concentration margins for the detection bounds.  m is the number of samples
// one density estimate is built from.  t2 = eps/2 - c(Q_i), where c(Q) is the
// bandwidth-induced correction (sqrt-integral and curvature-integral terms at
// h = m^{-1/5}); t1 = (1/4) TV(Q1,Q2) - eps/2 - c(Q0).  Exponents are
// xi = 2 t^2, reported valid only when the margin is positive.
struct ErrorExponents {
  double xi1 = 0.0;
  double xi2 = 0.0;
  double tv12 = 0.0;
  double epsilon = 0.0;
  double t1 = 0.0;  // signed margins; negative => the bound says nothing
  double t2 = 0.0;
  bool xi1_valid = false;
  bool xi2_valid = false;
  double corr_q1 = 0.0;  // the c(Q) corrections, exposed for reporting
  double corr_q2 = 0.0;
  double corr_q0 = 0.0;
};

// q0 defaults to the ensemble mixture at y_est.
ErrorExponents error_exponents(const Ensemble& ensemble, double epsilon, int m,
                               std::optional<PortDensity> q0 = {},
                               double y_est = 0.0);

// Kernel constants of the Gaussian smoothing kernel: integral of K^2 and the
// second moment; used in the corrections and cross-checked by quadrature in
// the tests.
inline constexpr double kKernelRoughness = 0.28209479177387814;  // 1/(2 sqrt(pi))
inline constexpr double kKernelSecondMoment = 1.0;

struct DetectionConfig {
  Ensemble ensemble;
  std::vector<int> m_values;
  std::optional<double> epsilon;  // default: (1/4) tv_q1_q2 at geometry.y_est
  Geometry geometry;
  double exclusion_overhead = 0.1;
  std::optional<AttackStrategy> attack_strategy;  // default: left half-mimic
  std::optional<PortDensity> forge_density;       // default: ensemble mixture
};

struct DetectionPoint {
  int m = 0;
  double false_alarm = 0.0;   // P(flag | honest)
  double miss_attack = 0.0;   // P(no flag | state attack)
  double miss_forge = 0.0;    // P(no flag | forgery)
  double total_error = 0.0;   // false_alarm + max(miss_attack, miss_forge)
  double bound_false_alarm = 0.0;  // 2 exp(-(m/2) xi2); inf when invalid
  double bound_total = 0.0;
  bool exponents_valid = false;
  ErrorExponents exponents;
};

struct ErrorSummary {
  std::vector<DetectionPoint> points;
  double epsilon = 0.0;
  double log_slope = 0.0;  // least-squares slope of log total_error vs m
  bool log_strictly_decreasing = false;
};

// Runs `trials` detection trials per scenario per m value; trial streams are
// derived from (seed, m index, scenario, trial) so results do not depend on
// evaluation order.  trials >= 100 required, epsilon validated against
// (0, (1/2) TV(Q1,Q2)).
ErrorSummary estimate_error_probability(const DetectionConfig& config,
                                        int trials, std::uint64_t seed);

}  // namespace qrs
