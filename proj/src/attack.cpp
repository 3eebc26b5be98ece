#include "qrs/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "qrs/kernels.hpp"
#include "qrs/rng.hpp"

namespace qrs {

namespace {

constexpr double kColNormSlack = 1e-12;

double clamp_probability(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite");
  if (v > 1.0 + 1e-9 || v < -1e-9) {
    throw NumericError(std::string(what) + ": value " + std::to_string(v) +
                       " outside [0, 1]");
  }
  return std::min(std::max(v, 0.0), 1.0);
}

}  // namespace

EffectiveU effective_u(const AttackStrategy& s) {
  EffectiveU eff{Mat2(s.v.at(0, 0) * s.p.at(0, 0),   // stays left, returns left
                      s.w.at(0, 1) * s.p.at(1, 0),   // left->right, returns right
                      s.v.at(0, 1) * s.q.at(1, 0),   // right->left, returns left
                      s.w.at(0, 0) * s.q.at(0, 0))}; // stays right, returns right
  for (int c = 0; c < 2; ++c) {
    if (eff.m.col_norm(c) > 1.0 + kColNormSlack) {
      throw NumericError("effective_u: column norm exceeds 1");
    }
  }
  return eff;
}

double attack_fidelity(const Unitary2& u, const AttackStrategy& strategy,
                       const ProbeSpec& probe, double y_est, double y_fake) {
  const Complex ov =
      attack_overlap(u, effective_u(strategy).m, probe, y_est, y_fake);
  return clamp_probability(std::norm(ov), "attack_fidelity");
}

double ensemble_attack_fidelity(const Unitary2& u,
                                const AttackStrategy& strategy,
                                const Ensemble& ensemble, double y_est,
                                double y_fake) {
  const EffectiveU eff = effective_u(strategy);
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const Complex ov =
        attack_overlap(u, eff.m, ensemble.probe(i), y_est, y_fake);
    acc += ensemble.weight(i) *
           clamp_probability(std::norm(ov), "attack_fidelity");
  }
  return acc;
}

double survival_probability(const Mat2& u_prime, const ProbeSpec& probe,
                            double y_fake) {
  const int n = probe.n();
  const KernelParams params{probe.beta(), n, 0.0, n * y_fake};
  const Complex psi[2] = {probe.psi_l(), probe.psi_r()};
  Complex acc = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const QWeight w(std::conj(u_prime.at(0, p)) * u_prime.at(0, q),
                      std::conj(u_prime.at(1, p)) * u_prime.at(1, q));
      const auto kernel = [&params, p, q](int big_q) {
        return delta_pq(p + 1, q + 1, big_q, params);
      };
      acc += std::conj(psi[p]) * psi[q] * q_sum(w, kernel, n);
    }
  }
  if (std::abs(acc.imag()) > 1e-9) {
    throw NumericError("survival_probability: non-real norm");
  }
  return clamp_probability(acc.real(), "survival_probability");
}

OneSidePattern one_side_probabilities(const Mat2& transfer,
                                      const ProbeSpec& probe, double y) {
  const int n = probe.n();
  const double ny = n * y;
  const double gauss =
      std::exp(-probe.beta() * probe.beta() * ny * ny);
  const Complex cross_w = std::conj(probe.psi_l()) * probe.psi_r();
  const auto one_side = [&](int row) {
    const Complex tl = transfer.at(row, 0);
    const Complex tr = transfer.at(row, 1);
    const double direct =
        std::norm(probe.psi_l()) * std::pow(std::norm(tl), n) +
        std::norm(probe.psi_r()) * std::pow(std::norm(tr), n);
    const Complex cross_amp = std::pow(std::conj(tl) * tr, n);
    return clamp_probability(
        direct + 2.0 * std::real(cross_w * cross_amp) * gauss,
        "one_side_probabilities");
  };
  return OneSidePattern{one_side(0), one_side(1)};
}

AttackStrategy make_identity_strategy() {
  const Unitary2 id(1, 0, 0, 1);
  return AttackStrategy{id, id, id, id};
}

AttackStrategy make_mirror_strategy() {
  const Unitary2 swap = make_reflection();
  return AttackStrategy{swap, swap, swap, swap};
}

AttackStrategy make_half_mimic_strategy(const Unitary2& u, int column) {
  if (column != 0 && column != 1) {
    throw std::invalid_argument("make_half_mimic_strategy: column must be 0/1");
  }
  const Unitary2 id(1, 0, 0, 1);
  const Unitary2 swap = make_reflection();
  if (column == 0) {
    // U'_00 = V_00 P_00 = u00, U'_10 = V_01 Q_10 = u10; right input erased.
    const Unitary2 v(u.at(0, 0), u.at(1, 0), -std::conj(u.at(1, 0)),
                     std::conj(u.at(0, 0)));
    return AttackStrategy{v, id, id, swap};
  }
  // U'_01 = W_01 P_10 = u01, U'_11 = W_00 Q_00 = u11; left input erased.
  const Unitary2 w(u.at(1, 1), u.at(0, 1), -std::conj(u.at(0, 1)),
                   std::conj(u.at(1, 1)));
  return AttackStrategy{id, w, swap, id};
}

Unitary2 u2_from_angles(double a, double b, double t, double g) {
  const double c = std::cos(t);
  const double s = std::sin(t);
  const Complex ea = std::polar(1.0, a);
  return Unitary2(ea * std::polar(c, b), ea * std::polar(s, g),
                  -ea * std::polar(s, -g), ea * std::polar(c, -b));
}

std::array<double, 4> angles_from_unitary(const Unitary2& u) {
  const Complex t00 = u.at(0, 0), t01 = u.at(0, 1);
  const Complex t10 = u.at(1, 0), t11 = u.at(1, 1);
  const double c = std::abs(t00);
  const double s = std::abs(t01);
  const double theta = std::atan2(s, c);

  // The global phase a is fixed only mod pi by any single entry pair, so try
  // both branches and keep the one that reconstructs u.
  std::array<double, 4> best{};
  double best_err = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    double a, b, g;
    if (c >= s) {
      a = 0.5 * (std::arg(t00) + std::arg(t11)) + k * M_PI;
      b = 0.5 * (std::arg(t00) - std::arg(t11)) + k * M_PI;
      g = s > 1e-12 ? std::arg(t01) - a : 0.0;
    } else {
      a = 0.5 * (std::arg(t01) + std::arg(t10) - M_PI) + k * M_PI;
      g = 0.5 * (std::arg(t01) - std::arg(t10) + M_PI) + k * M_PI;
      b = c > 1e-12 ? std::arg(t00) - a : 0.0;
    }
    const Unitary2 rec = u2_from_angles(a, b, theta, g);
    double err = 0.0;
    for (int r = 0; r < 2; ++r) {
      for (int col = 0; col < 2; ++col) {
        err = std::max(err, std::abs(rec.at(r, col) - u.at(r, col)));
      }
    }
    if (err < best_err) {
      best_err = err;
      best = {a, b, theta, g};
    }
  }
  if (best_err > 1e-9) {
    throw NumericError("angles_from_unitary: reconstruction failed");
  }
  return best;
}

namespace {

AttackStrategy strategy_from_point(const std::array<double, 16>& x) {
  const auto part = [&x](int i) {
    return u2_from_angles(x[4 * i], x[4 * i + 1], x[4 * i + 2], x[4 * i + 3]);
  };
  return AttackStrategy{part(0), part(1), part(2), part(3)};
}

std::array<double, 16> point_from_strategy(const AttackStrategy& s) {
  std::array<double, 16> x{};
  const Unitary2* us[4] = {&s.v, &s.w, &s.p, &s.q};
  for (int i = 0; i < 4; ++i) {
    const auto a = angles_from_unitary(*us[i]);
    std::copy(a.begin(), a.end(), x.begin() + 4 * i);
  }
  return x;
}

struct RestartOutcome {
  std::array<double, 16> best_x{};
  double best_val = -1.0;  // fidelity (maximized)
  bool converged = false;
};

// One Nelder-Mead run with a hard cap on objective evaluations.  The
// evaluation sequence depends only on (start, objective), so a larger budget
// replays a smaller one exactly and then continues -- the monotonicity
// contract of optimize_attack rests on this.
template <typename F>
RestartOutcome nelder_mead(const F& objective, const std::array<double, 16>& start,
                           int budget) {
  constexpr int kDim = 16;
  constexpr double kInitStep = 0.4;
  constexpr double kSpreadTol = 1e-13;

  RestartOutcome out;
  int evals = 0;
  const auto eval = [&](const std::array<double, kDim>& x) {
    const double v = objective(x);
    ++evals;
    if (v > out.best_val) {
      out.best_val = v;
      out.best_x = x;
    }
    return -v;  // simplex machinery minimizes
  };

  std::vector<std::array<double, kDim>> pts(kDim + 1, start);
  std::vector<double> vals(kDim + 1);
  std::vector<int> order(kDim + 1);
  for (int i = 0; i <= kDim && evals < budget; ++i) {
    if (i > 0) pts[i][i - 1] += kInitStep;
    vals[i] = eval(pts[i]);
  }
  if (evals < kDim + 1) return out;  // budget smaller than one simplex

  while (evals < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    const int lo = order[0], hi = order[kDim], second_hi = order[kDim - 1];
    if (vals[hi] - vals[lo] < kSpreadTol) {
      out.converged = true;
      break;
    }

    std::array<double, kDim> centroid{};
    for (int i = 0; i <= kDim; ++i) {
      if (i == hi) continue;
      for (int d = 0; d < kDim; ++d) centroid[d] += pts[i][d];
    }
    for (int d = 0; d < kDim; ++d) centroid[d] /= kDim;

    const auto blend = [&](double coef) {
      std::array<double, kDim> p{};
      for (int d = 0; d < kDim; ++d) {
        p[d] = centroid[d] + coef * (pts[hi][d] - centroid[d]);
      }
      return p;
    };

    const auto reflected = blend(-1.0);
    const double fr = eval(reflected);
    if (evals >= budget) break;
    if (fr < vals[lo]) {
      const auto expanded = blend(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[hi] = expanded;
        vals[hi] = fe;
      } else {
        pts[hi] = reflected;
        vals[hi] = fr;
      }
    } else if (fr < vals[second_hi]) {
      pts[hi] = reflected;
      vals[hi] = fr;
    } else {
      const bool outside = fr < vals[hi];
      const auto contracted = blend(outside ? -0.5 : 0.5);
      const double fc = eval(contracted);
      if (evals >= budget) break;
      if (fc < (outside ? fr : vals[hi])) {
        pts[hi] = contracted;
        vals[hi] = fc;
      } else {
        for (int i = 0; i <= kDim && evals < budget; ++i) {  // shrink
          if (i == lo) continue;
          for (int d = 0; d < kDim; ++d) {
            pts[i][d] = 0.5 * (pts[i][d] + pts[lo][d]);
          }
          vals[i] = eval(pts[i]);
        }
      }
    }
  }
  return out;
}

}  // namespace

OptimizeResult optimize_attack(const Unitary2& u, const Ensemble& ensemble,
                               double y_est, double y_fake, int budget,
                               std::uint64_t seed, int restarts) {
  if (budget < 1) throw std::invalid_argument("optimize_attack: budget >= 1");
  if (restarts < 1) throw std::invalid_argument("optimize_attack: restarts >= 1");

  const auto objective = [&](const std::array<double, 16>& x) {
    return ensemble_attack_fidelity(u, strategy_from_point(x), ensemble, y_est,
                                    y_fake);
  };

  // Known constructions as warm starts; the remaining restarts draw uniform
  // angles from their own deterministic stream.
  std::vector<std::array<double, 16>> warm;
  warm.push_back(point_from_strategy(make_mirror_strategy()));
  warm.push_back(point_from_strategy(make_half_mimic_strategy(u, 0)));
  warm.push_back(point_from_strategy(make_half_mimic_strategy(u, 1)));
  warm.push_back(point_from_strategy(make_identity_strategy()));

  OptimizeResult result;
  for (int r = 0; r < restarts; ++r) {
    std::array<double, 16> start{};
    if (r < static_cast<int>(warm.size())) {
      start = warm[r];
    } else {
      Rng stream(derive_seed(seed, static_cast<std::uint64_t>(r)));
      for (double& x : start) x = (2.0 * stream.uniform() - 1.0) * M_PI;
    }
    const RestartOutcome outcome = nelder_mead(objective, start, budget);
    result.converged = result.converged || outcome.converged;
    if (outcome.best_val > result.fidelity ||
        (r == 0 && result.best_restart < 0)) {
      result.fidelity = std::max(outcome.best_val, 0.0);
      result.strategy = strategy_from_point(outcome.best_x);
      result.best_restart = r;
    }
  }
  return result;
}

double p1_upper_bound(const Ensemble& ensemble) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const ProbeSpec& pr = ensemble.probe(i);
    acc += ensemble.weight(i) *
           std::max(std::norm(pr.psi_l()), std::norm(pr.psi_r()));
  }
  return acc;
}

double p2_upper_bound(const Ensemble& ensemble) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
      acc += ensemble.weight(i) * ensemble.weight(j) *
             std::abs(probe_inner_product(ensemble.probe(i),
                                          ensemble.probe(j)));
    }
  }
  return std::sqrt(acc);
}

double p2_lower_bound(const Ensemble& ensemble) {
  double acc = 0.0;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t j = 0; j < ensemble.size(); ++j) {
      const double c = std::abs(probe_inner_product(ensemble.probe(i),
                                                    ensemble.probe(j)));
      acc += ensemble.weight(i) * ensemble.weight(j) *
             std::sqrt(std::max(0.0, 1.0 - c * c));
    }
  }
  return 1.0 - acc;
}

double p2_optimal_forgery(const Ensemble& ensemble, const Unitary2& u,
                          double y_est) {
  const std::size_t k = ensemble.size();
  if (k > 16) {
    throw std::invalid_argument("p2_optimal_forgery: ensemble size > 16");
  }
  // Weighted Gram matrix of the honest outputs; its top eigenvalue is the
  // acceptance of the best fixed forged state against the average fidelity
  // test.
  Eigen::MatrixXcd gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const Complex g =
          attack_overlap_cross(u, u.mat(), ensemble.probe(i),
                               ensemble.probe(j), y_est, y_est);
      gram(i, j) = std::sqrt(ensemble.weight(i) * ensemble.weight(j)) * g;
    }
  }
  const Eigen::MatrixXcd herm = 0.5 * (gram + gram.adjoint());
  if ((gram - herm).cwiseAbs().maxCoeff() > 1e-9) {
    throw NumericError("p2_optimal_forgery: Gram matrix not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm);
  if (solver.info() != Eigen::Success) {
    throw NumericError("p2_optimal_forgery: eigensolver failed");
  }
  const double top = solver.eigenvalues().maxCoeff();
  return std::max(top, 1e-12);
}

BoundReport bound_report(const Ensemble& ensemble, const Unitary2& u,
                         double y_est) {
  BoundReport rep{p1_upper_bound(ensemble), p2_upper_bound(ensemble),
                  p2_lower_bound(ensemble),
                  p2_optimal_forgery(ensemble, u, y_est)};
  const double tol = 1e-9;
  if (!(rep.p2_lower >= -tol && rep.p2_lower <= rep.p2_exact_for_measurement + tol &&
        rep.p2_exact_for_measurement <= rep.p2_upper + tol &&
        rep.p2_upper <= 1.0 + tol)) {
    throw NumericError("bound_report: bound chain violated");
  }
  return rep;
}

}  // namespace qrs
