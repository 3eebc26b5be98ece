#include "qrs/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrs {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double gaussian_pdf(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return kInvSqrt2Pi / sd * std::exp(-0.5 * u * u);
}

// Adaptive Simpson with the classic 15x error heuristic.
double simpson_recurse(const std::function<double(double)>& f, double a,
                       double m, double b, double fa, double fm, double fb,
                       double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, lm, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson_recurse(f, m, rm, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Integrate f over [a, b] to absolute tolerance tol.  The interval is
// pre-split so narrow features (KDE spikes) cannot hide from the error
// estimate of a single top-level panel.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, int presplit = 64) {
  double total = 0.0;
  const double step = (b - a) / presplit;
  const double panel_tol = tol / presplit;
  for (int i = 0; i < presplit; ++i) {
    const double lo = a + i * step, hi = lo + step, mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += simpson_recurse(f, lo, mid, hi, flo, fmid, fhi, whole, panel_tol, 20);
  }
  return total;
}

}  // namespace

KdeEstimate::KdeEstimate(std::vector<double> samples)
    : KdeEstimate(std::move(samples), 0.0) {
  if (sorted_.size() < 2) {
    throw std::invalid_argument("KdeEstimate: need at least 2 samples");
  }
  h_ = std::pow(static_cast<double>(sorted_.size()), -0.2);
}

KdeEstimate::KdeEstimate(std::vector<double> samples, double bandwidth)
    : sorted_(std::move(samples)), h_(bandwidth) {
  if (sorted_.empty()) {
    throw std::invalid_argument("KdeEstimate: empty sample set");
  }
  for (double s : sorted_) {
    if (!std::isfinite(s)) {
      throw std::invalid_argument("KdeEstimate: non-finite sample");
    }
  }
  std::sort(sorted_.begin(), sorted_.end());
  if (h_ != 0.0 && !(h_ > 0.0 && std::isfinite(h_))) {
    throw std::invalid_argument("KdeEstimate: bandwidth must be positive");
  }
}

double KdeEstimate::pdf(double x) const {
  // Kernel support truncated at 8 bandwidths: the discarded tail mass is
  // below 1e-14, far inside every tolerance used on KDEs.
  const double window = 8.0 * h_;
  const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x - window);
  const auto hi = std::upper_bound(lo, sorted_.end(), x + window);
  double acc = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double u = (x - *it) / h_;
    acc += std::exp(-0.5 * u * u);
  }
  return acc * kInvSqrt2Pi / (static_cast<double>(sorted_.size()) * h_);
}

KdeEstimate kde_build(std::vector<double> samples) {
  return KdeEstimate(std::move(samples));
}

double tv_distance(const std::function<double(double)>& f,
                   const std::function<double(double)>& g,
                   const IntegrationGrid& grid) {
  if (!(grid.hi > grid.lo) || !std::isfinite(grid.lo) ||
      !std::isfinite(grid.hi)) {
    throw std::invalid_argument("tv_distance: bad integration window");
  }
  const double mass_f = integrate(f, grid.lo, grid.hi, 1e-6);
  const double mass_g = integrate(g, grid.lo, grid.hi, 1e-6);
  if (mass_f < 1.0 - 1e-4 || mass_g < 1.0 - 1e-4) {
    throw std::invalid_argument(
        "tv_distance: integration window misses more than 1e-4 of a "
        "density's mass");
  }
  const auto diff = [&f, &g](double x) { return std::abs(f(x) - g(x)); };
  const double integral = integrate(diff, grid.lo, grid.hi, 1e-5);
  return 0.5 * integral;
}

MeasurementSample sample_honest(const ProbeSpec& probe, double y, Rng& rng) {
  const int port = rng.bernoulli(std::norm(probe.psi_r())) ? 1 : 0;
  const double mean = (port == 0 ? -1.0 : 1.0) * probe.n() * y;
  const double sd = 1.0 / (std::sqrt(2.0) * probe.beta());
  return MeasurementSample{port, rng.normal(mean, sd)};
}

MeasurementSample sample_honest(const Unitary2& detector_combiner,
                                const Unitary2& probe_combiner,
                                const ProbeSpec& probe, double y, Rng& rng) {
  const Unitary2 balanced = make_balanced();
  const Unitary2 expected_detector = conjugate(balanced);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (std::abs(probe_combiner.at(r, c) - balanced.at(r, c)) > 1e-9 ||
          std::abs(detector_combiner.at(r, c) - expected_detector.at(r, c)) >
              1e-9) {
        throw std::invalid_argument(
            "sample_honest: reduced model requires the balanced probe "
            "combiner and its conjugate on the detector side");
      }
    }
  }
  return sample_honest(probe, y, rng);
}

QfiResult fi_monte_carlo_score(const ProbeSpec& probe, double y, int samples,
                               Rng& rng) {
  if (samples < 2) {
    throw std::invalid_argument("fi_monte_carlo_score: samples >= 2");
  }
  const double sd = 1.0 / (std::sqrt(2.0) * probe.beta());
  const double inv_var = 1.0 / (sd * sd);
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const MeasurementSample s = sample_honest(probe, y, rng);
    const double mean = (s.port == 0 ? -1.0 : 1.0) * probe.n() * y;
    const double dmean = (s.port == 0 ? -1.0 : 1.0) * probe.n();
    const double score = (s.r - mean) * inv_var * dmean;
    const double sq = score * score;
    sum += sq;
    sum_sq += sq * sq;
  }
  const double m = samples;
  QfiResult out;
  out.method = QfiMethod::monte_carlo;
  out.value = sum / m;
  const double var = std::max(0.0, sum_sq / m - out.value * out.value);
  out.stderr_estimate = std::sqrt(var / m);
  return out;
}

double PortDensity::pdf(int port, double r) const {
  if (port != 0 && port != 1) {
    throw std::invalid_argument("PortDensity::pdf: port must be 0/1");
  }
  return w[port] * gaussian_pdf(r, mu[port], sd);
}

MeasurementSample PortDensity::sample(Rng& rng) const {
  const double total = w[0] + w[1];
  const int port = rng.bernoulli(w[1] / total) ? 1 : 0;
  return MeasurementSample{port, rng.normal(mu[port], sd)};
}

PortDensity honest_port_density(const ProbeSpec& probe, double y) {
  const double ny = probe.n() * y;
  return PortDensity{{std::norm(probe.psi_l()), std::norm(probe.psi_r())},
                     {-ny, ny},
                     1.0 / (std::sqrt(2.0) * probe.beta())};
}

PortDensity mixture_port_density(const Ensemble& ensemble, double y) {
  PortDensity mix{{0.0, 0.0},
                  {-static_cast<double>(ensemble.n()) * y,
                   static_cast<double>(ensemble.n()) * y},
                  1.0 / (std::sqrt(2.0) * ensemble.beta())};
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    mix.w[0] += ensemble.weight(i) * std::norm(ensemble.probe(i).psi_l());
    mix.w[1] += ensemble.weight(i) * std::norm(ensemble.probe(i).psi_r());
  }
  return mix;
}

double tv_q1_q2(const Ensemble& ensemble, double y_est) {
  if (ensemble.size() != 2) {
    throw std::invalid_argument("tv_q1_q2: two-state ensemble required");
  }
  const PortDensity q1 = honest_port_density(ensemble.probe(0), y_est);
  const PortDensity q2 = honest_port_density(ensemble.probe(1), y_est);
  double acc = 0.0;
  for (int port = 0; port < 2; ++port) {
    const double lo =
        std::min(q1.mu[port], q2.mu[port]) - 10.0 * q1.sd;
    const double hi =
        std::max(q1.mu[port], q2.mu[port]) + 10.0 * q1.sd;
    const auto diff = [&, port](double r) {
      return std::abs(q1.pdf(port, r) - q2.pdf(port, r));
    };
    acc += integrate(diff, lo, hi, 1e-6);
  }
  return 0.5 * acc;
}

Scenario Scenario::honest() { return Scenario{Kind::honest, {}, {}}; }

Scenario Scenario::attack(const AttackStrategy& strategy) {
  return Scenario{Kind::attack_on_state, strategy, {}};
}

Scenario Scenario::forge(const PortDensity& q0) {
  return Scenario{Kind::forge, {}, q0};
}

namespace {

// Per-(state, port) estimated density: KDE plus empirical port weight.
struct BucketEstimate {
  std::optional<KdeEstimate> kde;
  double weight = 0.0;

  double pdf(double r) const { return kde ? weight * kde->pdf(r) : 0.0; }
};

// Exact TV between the product of two reference densities and the product of
// two estimates, plus the one-factor-at-a-time decomposition diagnostic.
struct ProductTvResult {
  double product = 0.0;
  double decomposition = 0.0;
};

ProductTvResult product_tv(const PortDensity& q1, const PortDensity& q2,
                           const std::array<BucketEstimate, 2>& p1,
                           const std::array<BucketEstimate, 2>& p2) {
  double lo = std::min({q1.mu[0], q1.mu[1], q2.mu[0], q2.mu[1]}) -
              8.0 * std::max(q1.sd, q2.sd);
  double hi = std::max({q1.mu[0], q1.mu[1], q2.mu[0], q2.mu[1]}) +
              8.0 * std::max(q1.sd, q2.sd);
  for (const auto* est : {&p1, &p2}) {
    for (const auto& bucket : *est) {
      if (!bucket.kde) continue;
      lo = std::min(lo, bucket.kde->min_sample() - 8.0 * bucket.kde->bandwidth());
      hi = std::max(hi, bucket.kde->max_sample() + 8.0 * bucket.kde->bandwidth());
    }
  }

  constexpr int kNodes = 512;
  const double step = (hi - lo) / kNodes;
  // Midpoint tabulation of all four (distribution, port) slices.
  std::array<std::array<std::vector<double>, 2>, 4> tab;
  for (auto& d : tab)
    for (auto& v : d) v.assign(kNodes, 0.0);
  for (int j = 0; j < kNodes; ++j) {
    const double r = lo + (j + 0.5) * step;
    for (int port = 0; port < 2; ++port) {
      tab[0][port][j] = q1.pdf(port, r);
      tab[1][port][j] = q2.pdf(port, r);
      tab[2][port][j] = p1[port].pdf(r);
      tab[3][port][j] = p2[port].pdf(r);
    }
  }

  ProductTvResult out;
  for (int pa = 0; pa < 2; ++pa) {
    for (int pb = 0; pb < 2; ++pb) {
      const auto& a = tab[0][pa];
      const auto& b = tab[1][pb];
      const auto& c = tab[2][pa];
      const auto& d = tab[3][pb];
      double cell = 0.0;
      for (int j = 0; j < kNodes; ++j) {
        const double aj = a[j], cj = c[j];
        for (int k = 0; k < kNodes; ++k) {
          cell += std::abs(aj * b[k] - cj * d[k]);
        }
      }
      out.product += cell;
    }
  }
  out.product *= 0.5 * step * step;

  for (int ref = 0; ref < 2; ++ref) {
    double acc = 0.0;
    for (int port = 0; port < 2; ++port) {
      const auto& q = tab[ref][port];
      const auto& p = tab[2 + ref][port];
      for (int j = 0; j < kNodes; ++j) acc += std::abs(q[j] - p[j]);
    }
    out.decomposition += 0.5 * acc * step;
  }
  return out;
}

}  // namespace

DetectionVerdict run_detection_trial(const Ensemble& ensemble,
                                     const Scenario& scenario, int m_samples,
                                     double epsilon, const Geometry& geometry,
                                     Rng& rng, double exclusion_overhead) {
  if (ensemble.size() != 2) {
    throw std::invalid_argument("run_detection_trial: two-state ensemble");
  }
  if (m_samples < 4 || m_samples % 2 != 0) {
    throw std::invalid_argument(
        "run_detection_trial: m_samples must be even and >= 4");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("run_detection_trial: epsilon must be >= 0");
  }
  if (!(exclusion_overhead >= 0.0 && exclusion_overhead < 1.0)) {
    throw std::invalid_argument(
        "run_detection_trial: exclusion_overhead must be in [0, 1)");
  }
  if (scenario.kind == Scenario::Kind::attack_on_state && !scenario.strategy) {
    throw std::invalid_argument("run_detection_trial: attack needs a strategy");
  }
  if (scenario.kind == Scenario::Kind::forge && !scenario.q0) {
    throw std::invalid_argument("run_detection_trial: forge needs a density");
  }

  const int n = ensemble.n();
  const Unitary2 u = make_balanced();
  const double sd = 1.0 / (std::sqrt(2.0) * ensemble.beta());

  // The all-on-one-rail signature is uninformative for a single photon, so
  // exclusion rounds only run for N >= 2.
  const int k_excl =
      n >= 2 ? static_cast<int>(std::ceil(exclusion_overhead * m_samples)) : 0;

  // Per-state round statistics for the scenario under test.
  double survive[2] = {1.0, 1.0};
  double all_left[2] = {0.0, 0.0};
  double all_right[2] = {0.0, 0.0};
  Mat2 u_prime;
  int dominant_column = 0;
  if (scenario.kind == Scenario::Kind::attack_on_state) {
    u_prime = effective_u(*scenario.strategy).m;
    dominant_column = u_prime.col_norm(1) > u_prime.col_norm(0) ? 1 : 0;
    for (int i = 0; i < 2; ++i) {
      survive[i] =
          survival_probability(u_prime, ensemble.probe(i), geometry.y_fake);
      const OneSidePattern sides = one_side_probabilities(
          u_prime, ensemble.probe(i), geometry.y_fake);
      all_left[i] = sides.all_left;
      all_right[i] = sides.all_right;
    }
  } else {
    // Honest states (or genuinely prepared forged states) pass through the
    // honest transform; forged states are aimed at y_est.
    const double y_sent = scenario.kind == Scenario::Kind::honest
                              ? geometry.y_true
                              : geometry.y_est;
    for (int i = 0; i < 2; ++i) {
      const OneSidePattern sides =
          one_side_probabilities(u.mat(), ensemble.probe(i), y_sent);
      all_left[i] = sides.all_left;
      all_right[i] = sides.all_right;
    }
    if (scenario.kind == Scenario::Kind::forge) {
      // The forger sends the ensemble mixture: average the side patterns.
      double l = 0.0, r = 0.0;
      for (int i = 0; i < 2; ++i) {
        l += ensemble.weight(i) * all_left[i];
        r += ensemble.weight(i) * all_right[i];
      }
      all_left[0] = all_left[1] = l;
      all_right[0] = all_right[1] = r;
    }
  }

  bool lost = false;
  bool both_sides_seen = (k_excl == 0);
  for (int j = 0; j < k_excl && !lost; ++j) {
    const int state = j % 2;
    const double x = rng.uniform();
    const double p_lost = 1.0 - survive[state];
    if (x < p_lost) {
      lost = true;
    } else if (x >= p_lost + all_left[state] + all_right[state]) {
      both_sides_seen = true;
    }
  }

  std::array<std::array<std::vector<double>, 2>, 2> buckets;
  if (!lost) {
    for (int j = 0; j < m_samples && !lost; ++j) {
      const int state = j % 2;
      MeasurementSample s;
      switch (scenario.kind) {
        case Scenario::Kind::honest:
          s = sample_honest(ensemble.probe(state), geometry.y_true, rng);
          break;
        case Scenario::Kind::attack_on_state: {
          if (rng.uniform() >= survive[state]) {
            lost = true;
            continue;
          }
          // Surviving rounds look like the honest output of the rail the
          // strategy mimics.  Exact when the live column of U' matches a
          // column of U up to phase (all constructed mimics); for other
          // strategies this is the dominant-column approximation.
          const double mean =
              (dominant_column == 0 ? -1.0 : 1.0) * n * geometry.y_fake;
          s = MeasurementSample{dominant_column, rng.normal(mean, sd)};
          break;
        }
        case Scenario::Kind::forge:
          s = scenario.q0->sample(rng);
          break;
      }
      buckets[state][s.port].push_back(s.r);
    }
  }

  DetectionVerdict verdict;
  verdict.threshold = epsilon;
  verdict.step1_pass = !lost && both_sides_seen;
  if (!verdict.step1_pass) {
    verdict.cheater_flag = true;
    return verdict;
  }

  const double half = m_samples / 2.0;
  std::array<std::array<BucketEstimate, 2>, 2> est;
  for (int state = 0; state < 2; ++state) {
    for (int port = 0; port < 2; ++port) {
      auto& samples = buckets[state][port];
      auto& bucket = est[state][port];
      bucket.weight = samples.size() / half;
      if (samples.size() >= 2) {
        const double h = std::pow(static_cast<double>(samples.size()), -0.2);
        bucket.kde.emplace(std::move(samples), h);
      } else if (samples.size() == 1) {
        // A lone observation gets unit bandwidth: no count to tune by.
        bucket.kde.emplace(std::move(samples), 1.0);
      }
    }
  }

  const PortDensity q1 = honest_port_density(ensemble.probe(0), geometry.y_est);
  const PortDensity q2 = honest_port_density(ensemble.probe(1), geometry.y_est);
  const ProductTvResult tv = product_tv(q1, q2, est[0], est[1]);
  verdict.tv_stat = tv.product;
  verdict.tv_decomposition = tv.decomposition;
  verdict.cheater_flag = verdict.tv_stat > epsilon;
  return verdict;
}

namespace {

// Bandwidth-induced correction c(Q) entering both exponent margins: at
// h = m^{-1/5}, (1/2) h^2... the sqrt-integral term scales as m^{-2/5} and so
// does the curvature term, so both are folded at that common power.
double exponent_correction(const PortDensity& q, int m) {
  const double m25 = std::pow(static_cast<double>(m), -0.4);
  double sqrt_integral = 0.0;
  double curvature_integral = 0.0;
  for (int port = 0; port < 2; ++port) {
    if (q.w[port] <= 0.0) continue;
    const double mu = q.mu[port], sd = q.sd;
    // sqrt(Q) has sd*sqrt2 tails; 16 sd covers it to well below 1e-10.
    sqrt_integral += integrate(
        [&](double r) { return std::sqrt(q.pdf(port, r)); }, mu - 16.0 * sd,
        mu + 16.0 * sd, 1e-8);
    curvature_integral += integrate(
        [&](double r) {
          const double u = (r - mu) / sd;
          return q.w[port] * std::abs(u * u - 1.0) / (sd * sd) *
                 gaussian_pdf(r, mu, sd);
        },
        mu - 12.0 * sd, mu + 12.0 * sd, 1e-8);
  }
  return 0.5 * m25 * std::sqrt(kKernelRoughness) * sqrt_integral +
         0.25 * m25 * kKernelSecondMoment * curvature_integral;
}

}  // namespace

ErrorExponents error_exponents(const Ensemble& ensemble, double epsilon, int m,
                               std::optional<PortDensity> q0, double y_est) {
  if (m < 2) throw std::invalid_argument("error_exponents: m >= 2 required");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("error_exponents: epsilon must be in (0, 1)");
  }
  ErrorExponents out;
  out.epsilon = epsilon;
  out.tv12 = tv_q1_q2(ensemble, y_est);

  const PortDensity dq1 = honest_port_density(ensemble.probe(0), y_est);
  const PortDensity dq2 = honest_port_density(ensemble.probe(1), y_est);
  const PortDensity dq0 = q0.value_or(mixture_port_density(ensemble, y_est));
  out.corr_q1 = exponent_correction(dq1, m);
  out.corr_q2 = exponent_correction(dq2, m);
  out.corr_q0 = exponent_correction(dq0, m);

  out.t2 = epsilon / 2.0 - std::max(out.corr_q1, out.corr_q2);
  out.xi2_valid = out.t2 > 0.0;
  out.xi2 = out.xi2_valid ? 2.0 * out.t2 * out.t2 : 0.0;

  out.t1 = 0.25 * out.tv12 - 0.5 * epsilon - out.corr_q0;
  out.xi1_valid = out.t1 > 0.0;
  out.xi1 = out.xi1_valid ? 2.0 * out.t1 * out.t1 : 0.0;
  return out;
}

ErrorSummary estimate_error_probability(const DetectionConfig& config,
                                        int trials, std::uint64_t seed) {
  if (trials < 100) {
    throw std::invalid_argument("estimate_error_probability: trials >= 100");
  }
  const Ensemble& ens = config.ensemble;
  const double tv = tv_q1_q2(ens, config.geometry.y_est);
  const double epsilon = config.epsilon.value_or(0.25 * tv);
  if (!(epsilon > 0.0 && epsilon < 0.5 * tv)) {
    throw std::invalid_argument(
        "estimate_error_probability: epsilon must lie in (0, TV(Q1,Q2)/2)");
  }
  const AttackStrategy strategy = config.attack_strategy.value_or(
      make_half_mimic_strategy(make_balanced(), 0));
  const PortDensity q0 = config.forge_density.value_or(
      mixture_port_density(ens, config.geometry.y_est));

  double s_max = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    s_max = std::max(s_max, std::max(std::norm(ens.probe(i).psi_l()),
                                     std::norm(ens.probe(i).psi_r())));
  }

  const Scenario scenarios[3] = {Scenario::honest(), Scenario::attack(strategy),
                                 Scenario::forge(q0)};

  ErrorSummary summary;
  summary.epsilon = epsilon;
  for (std::size_t mi = 0; mi < config.m_values.size(); ++mi) {
    const int m = config.m_values[mi];
    DetectionPoint point;
    point.m = m;
    point.exponents = error_exponents(ens, epsilon, m / 2, q0,
                                      config.geometry.y_est);
    point.exponents_valid =
        point.exponents.xi1_valid && point.exponents.xi2_valid;
    const double inf = std::numeric_limits<double>::infinity();
    point.bound_false_alarm =
        point.exponents.xi2_valid
            ? 2.0 * std::exp(-0.5 * m * point.exponents.xi2)
            : inf;
    const double bound_forge =
        point.exponents.xi1_valid
            ? 2.0 * std::exp(-0.5 * m * point.exponents.xi1)
            : inf;
    point.bound_total = point.bound_false_alarm +
                        std::max(std::pow(s_max, m), bound_forge);

    double flag_rate[3] = {0.0, 0.0, 0.0};
    for (int s = 0; s < 3; ++s) {
      int flags = 0;
      for (int t = 0; t < trials; ++t) {
        Rng rng(derive_seed(seed, mi, static_cast<std::uint64_t>(s), t));
        const DetectionVerdict v =
            run_detection_trial(ens, scenarios[s], m, epsilon, config.geometry,
                                rng, config.exclusion_overhead);
        flags += v.cheater_flag ? 1 : 0;
      }
      flag_rate[s] = static_cast<double>(flags) / trials;
    }
    point.false_alarm = flag_rate[0];
    point.miss_attack = 1.0 - flag_rate[1];
    point.miss_forge = 1.0 - flag_rate[2];
    point.total_error =
        point.false_alarm + std::max(point.miss_attack, point.miss_forge);
    summary.points.push_back(point);
  }

  // Slope of log(total error) vs m over the points with positive error.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (const auto& p : summary.points) {
    if (p.total_error <= 0.0) continue;
    const double x = p.m, y = std::log(p.total_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2) {
    summary.log_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }
  summary.log_strictly_decreasing = true;
  for (std::size_t i = 1; i < summary.points.size(); ++i) {
    const double prev = summary.points[i - 1].total_error;
    const double cur = summary.points[i].total_error;
    const bool ok = cur < prev || (prev == 0.0 && cur == 0.0);
    summary.log_strictly_decreasing = summary.log_strictly_decreasing && ok;
  }
  return summary;
}

}  // namespace qrs
