// Acceptance harness: eleven end-to-end checks of the simulator against its
// quantitative targets.  Each criterion prints exactly one [PASS]/[FAIL] line
// with a short numeric summary; run all with no arguments or a single one
// with --criterion <k>.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "qrs/attack.hpp"
#include "qrs/core.hpp"
#include "qrs/detection.hpp"
#include "qrs/kernels.hpp"
#include "qrs/metrology.hpp"
#include "qrs/oracle.hpp"
#include "qrs/rng.hpp"

namespace {

using namespace qrs;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

ProbeSpec random_probe(int n, double beta, Rng& rng) {
  const Complex a(rng.normal(), rng.normal());
  const Complex b(rng.normal(), rng.normal());
  const double s = std::sqrt(std::norm(a) + std::norm(b));
  return ProbeSpec(n, beta, a / s, b / s);
}

Unitary2 random_unitary(Rng& rng) {
  return u2_from_angles((2 * rng.uniform() - 1) * M_PI,
                        (2 * rng.uniform() - 1) * M_PI, rng.uniform() * M_PI_2,
                        (2 * rng.uniform() - 1) * M_PI);
}

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

template <class F>
double simpson(F f, double lo, double hi, int panels) {
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// --- 1: balanced-combiner information sweep --------------------------------

Outcome criterion_1() {
  const double t0 = now_s();
  const double betas[] = {0.5, 1.0, 2.0};
  const Unitary2 u = make_balanced();
  double worst = 0.0;
  int worst_n = 0;
  double worst_beta = 0.0;
  int ok = 0, cells = 0;
  for (int bi = 0; bi < 3; ++bi) {
    for (int n = 1; n <= 20; ++n) {
      Rng rng(derive_seed(101, bi, n));
      const ProbeSpec probe = random_probe(n, betas[bi], rng);
      const double y = (2.0 * rng.uniform() - 1.0) * 2.0;
      const double fd = qfi_finite_difference(u, probe, y).value;
      const double closed = 2.0 * n * (n + 1) * betas[bi] * betas[bi];
      const double rel = std::abs(fd - closed) / closed;
      ++cells;
      if (rel < 1e-6) ++ok;
      if (rel > worst) {
        worst = rel;
        worst_n = n;
        worst_beta = betas[bi];
      }
    }
  }
  const double dt = now_s() - t0;
  const bool pass = ok == cells && dt < 10.0;
  return {pass,
          fmt("balanced-combiner FD information vs 2N(N+1)b^2: %d/%d cells "
              "< 1e-6, worst rel err %.3g at N=%d b=%g (one- and two-photon "
              "probes keep an interference term the closed form drops), %.1fs",
              ok, cells, worst, worst_n, worst_beta, dt)};
}

// --- 2: one-sided information and the factor-of-4 ratio --------------------

Outcome criterion_2() {
  const double t0 = now_s();
  const Unitary2 u = make_reflection();
  double worst = 0.0;
  int ok = 0, cells = 0;
  for (double beta : {0.5, 1.0, 2.0}) {
    for (int n = 1; n <= 20; ++n) {
      Rng rng(derive_seed(102, static_cast<std::uint64_t>(beta * 2), n));
      const ProbeSpec probe(n, beta, 1.0, 0.0);
      const double y = (2.0 * rng.uniform() - 1.0) * 2.0;
      const double fd = qfi_finite_difference(u, probe, y).value;
      const double closed = 8.0 * beta * beta * n * n;
      const double rel = std::abs(fd - closed) / closed;
      worst = std::max(worst, rel);
      ++cells;
      if (rel < 1e-6) ++ok;
    }
  }
  const double ratio =
      qfi_finite_difference(u, ProbeSpec(100, 1.0, 1.0, 0.0), 0.5).value /
      qfi_closed_form_balanced(ProbeSpec(100, 1.0, 0.6, 0.8)).value;
  const bool ratio_ok = std::abs(ratio - 4.0) / 4.0 < 0.02;
  const double dt = now_s() - t0;
  const bool pass = ok == cells && ratio_ok && dt < 10.0;
  return {pass, fmt("one-sided FD information vs 8b^2N^2: %d/%d cells < 1e-6 "
                    "(worst %.2g); one-sided/balanced ratio at N=100 is %.4f "
                    "(target 4 within 2%%), %.1fs",
                    ok, cells, worst, ratio, dt)};
}

// --- 3: explicit mimic strategies ------------------------------------------

Outcome criterion_3() {
  double worst = 0.0;
  int ok = 0, cells = 0;
  Rng rng(103);
  for (int n : {1, 4, 16}) {
    for (double y : {0.0, 0.35, -0.8}) {
      // A reflecting prover is replayed exactly by the swap strategy.
      const double f1 = attack_fidelity(make_reflection(), make_mirror_strategy(),
                                        random_probe(n, 1.0, rng), y, y);
      // A one-sided probe is replayed exactly by the matching half mimic.
      const Unitary2 u = random_unitary(rng);
      const double f2 = attack_fidelity(u, make_half_mimic_strategy(u, 0),
                                        ProbeSpec(n, 1.0, 1.0, 0.0), y, y);
      for (double f : {f1, f2}) {
        ++cells;
        worst = std::max(worst, 1.0 - f);
        if (1.0 - f < 1e-9) ++ok;
      }
    }
  }
  return {ok == cells,
          fmt("mimic strategies: %d/%d configurations with 1-fidelity < 1e-9 "
              "(worst deficit %.2g) across N in {1,4,16}, three offsets",
              ok, cells, worst)};
}

// --- 4: optimized interception vs the weight bound -------------------------

Outcome criterion_4() {
  const double t0 = now_s();
  const Unitary2 u = make_balanced();
  const int ns[] = {2, 4, 8, 16, 32};
  std::vector<double> fid;
  for (int n : ns) {
    const Ensemble ens = make_standard_ensemble(n, 1.0);
    fid.push_back(optimize_attack(u, ens, 0.0, 0.0, 2000).fidelity);
  }
  bool monotone = true;
  for (std::size_t i = 1; i < fid.size(); ++i)
    if (fid[i] > fid[i - 1] + 1e-9) monotone = false;
  const double gap = std::abs(fid.back() - 0.75);
  const bool near = gap <= 0.05;
  const double dt = now_s() - t0;
  const bool pass = monotone && near && dt < 300.0;
  return {pass,
          fmt("optimized interception fidelity over N={2,4,8,16,32}: "
              "[%.4f %.4f %.4f %.4f %.4f], monotone=%s; N=32 value vs the "
              "weight bound 3/4 differs by %.4f (needs <= 0.05; the bound "
              "tracks the overlap, the achievable fidelity is its square, "
              "ensemble-averaged to 5/16), %.0fs",
              fid[0], fid[1], fid[2], fid[3], fid[4], monotone ? "yes" : "no",
              gap, dt)};
}

// --- 5: forgery bound chain ------------------------------------------------

Outcome criterion_5() {
  int ok = 0;
  double worst_slack = 0.0;
  Rng rng(105);
  for (int i = 0; i < 50; ++i) {
    const int k = 2 + static_cast<int>(rng.uniform() * 2);
    const int n = 1 + static_cast<int>(rng.uniform() * 5);
    std::vector<double> w;
    std::vector<ProbeSpec> probes;
    double wsum = 0.0;
    const double beta = 0.6 + rng.uniform();
    for (int j = 0; j < k; ++j) {
      w.push_back(0.2 + rng.uniform());
      wsum += w.back();
      probes.push_back(random_probe(n, beta, rng));
    }
    for (double& v : w) v /= wsum;
    const BoundReport rep = bound_report(Ensemble(w, probes), make_balanced(),
                                         (rng.uniform() - 0.5) * 0.6);
    const double s1 = rep.p2_exact_for_measurement - rep.p2_lower;
    const double s2 = rep.p2_upper - rep.p2_exact_for_measurement;
    worst_slack = std::min({worst_slack, s1, s2});
    if (s1 >= -1e-9 && s2 >= -1e-9) ++ok;
  }
  const BoundReport std_rep =
      bound_report(make_standard_ensemble(2, 1.0), make_balanced(), 0.0);
  const double forge_err =
      std::abs(std_rep.p2_exact_for_measurement - (1.0 + std::sqrt(3.0) / 2.0) / 2.0);
  const double upper_err = std::abs(std_rep.p2_upper - 0.9659258262890683);
  const bool anchors = forge_err < 1e-9 && upper_err < 1e-9;
  return {ok == 50 && anchors,
          fmt("forgery chain lower <= exact <= upper on %d/50 random "
              "ensembles (worst slack %.1e); standard ensemble: exact "
              "forgery err %.1e vs (1+sqrt3/2)/2, upper err %.1e vs "
              "cos(pi/12)",
              ok, worst_slack, forge_err, upper_err)};
}

// --- 6: Monte Carlo information of the reduced measurement -----------------

Outcome criterion_6() {
  const double t0 = now_s();
  const std::pair<int, double> cells[] = {{1, 1.0}, {4, 1.0}, {4, 3.0}};
  int ok = 0;
  std::string parts;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto [n, beta] = cells[i];
    const ProbeSpec probe(n, beta, std::sqrt(0.5), std::sqrt(0.5));
    Rng rng(derive_seed(106, i));
    const QfiResult mc = fi_monte_carlo_score(probe, 0.2, 1000000, rng);
    const double closed = 2.0 * beta * beta * n * n;
    const double z = (mc.value - closed) / *mc.stderr_estimate;
    if (std::abs(z) <= 3.0) ++ok;
    parts += fmt(" (N=%d,b=%g: z=%+.2f)", n, beta, z);
  }
  const double dt = now_s() - t0;
  return {ok == 3 && dt < 30.0,
          fmt("score-function FI at 1e6 samples vs 2b^2N^2 within 3 standard "
              "errors:%s, %.1fs",
              parts.c_str(), dt)};
}

// --- 7: ensemble TV anchor -------------------------------------------------

Outcome criterion_7() {
  const double tv = tv_q1_q2(make_standard_ensemble(4, 1.0), 0.0);
  const double err = std::abs(tv - 0.5);
  return {err <= 1e-4,
          fmt("ensemble outcome TV at zero offset = %.6f (target 1/2, err "
              "%.1e)",
              tv, err)};
}

// --- 8: density-estimate concentration -------------------------------------

Outcome criterion_8() {
  const double t0 = now_s();
  const double eps = 0.1;
  const int reps = 500;
  const int ms[] = {100, 1000, 10000};

  // Bandwidth-induced corrections for the standard normal target:
  // (1/2) M^{-2/5} sqrt(R) Int sqrt(Q) + (1/4) M^{-2/5} mu Int |Q''|.
  const double int_sqrt =
      simpson([](double x) { return std::sqrt(phi(x)); }, -14.0, 14.0, 4000);
  const double int_curv = simpson(
      [](double x) { return std::abs(x * x - 1.0) * phi(x); }, -14.0, 14.0, 4000);

  double p[3], bound[3];
  for (int mi = 0; mi < 3; ++mi) {
    const int m = ms[mi];
    int exceed = 0;
    for (int rep = 0; rep < reps; ++rep) {
      Rng rng(derive_seed(108, mi, rep));
      std::vector<double> xs(m);
      for (double& x : xs) x = rng.normal();
      const KdeEstimate kde = kde_build(xs);
      const double h = kde.bandwidth();
      const IntegrationGrid grid{std::min(-10.0, kde.min_sample() - 8.0 * h),
                                 std::max(10.0, kde.max_sample() + 8.0 * h)};
      const double tv = tv_distance([&](double x) { return kde.pdf(x); }, phi, grid);
      if (tv > eps) ++exceed;
    }
    p[mi] = static_cast<double>(exceed) / reps;
    const double corr = std::pow(m, -0.4) * (0.5 * std::sqrt(kKernelRoughness) *
                                                 int_sqrt +
                                             0.25 * kKernelSecondMoment * int_curv);
    const double t = eps - corr;
    bound[mi] = t > 0.0 ? std::exp(-2.0 * m * t * t) : 2.0;  // > 1: no claim
  }
  bool monotone = p[0] >= p[1] && p[1] >= p[2];
  bool bounded = true;
  for (int mi = 0; mi < 3; ++mi)
    if (bound[mi] <= 1.0 && p[mi] > bound[mi]) bounded = false;
  const double dt = now_s() - t0;
  return {monotone && bounded && dt < 120.0,
          fmt("P(TV(KDE, normal) > 0.1) over 500 reps: M=100: %.3f, M=1000: "
              "%.3f (bound %.3g), M=10000: %.3f (bound ~0); monotone=%s, "
              "within bounds=%s, %.0fs",
              p[0], p[1], bound[1], p[2], monotone ? "yes" : "no",
              bounded ? "yes" : "no", dt)};
}

// --- 9: product-TV inequalities --------------------------------------------

Outcome criterion_9() {
  Rng rng(109);
  auto random_dist = [&](int k) {
    std::vector<double> d(k);
    double s = 0.0;
    for (double& v : d) {
      v = rng.uniform() + 1e-3;
      s += v;
    }
    for (double& v : d) v /= s;
    return d;
  };
  auto tv = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    return 0.5 * s;
  };
  auto tv_prod = [](const std::vector<double>& a1, const std::vector<double>& a2,
                    const std::vector<double>& b1, const std::vector<double>& b2) {
    double s = 0.0;
    for (std::size_t i = 0; i < a1.size(); ++i)
      for (std::size_t j = 0; j < a2.size(); ++j)
        s += std::abs(a1[i] * a2[j] - b1[i] * b2[j]);
    return 0.5 * s;
  };

  double worst1 = 1.0, worst2 = 1.0;
  int ok = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const int k1 = 2 + static_cast<int>(rng.uniform() * 4);
    const int k2 = 2 + static_cast<int>(rng.uniform() * 4);
    const auto a = random_dist(k1), c = random_dist(k1);
    const auto b = random_dist(k2), d = random_dist(k2);
    // Subadditivity over products: TV(A,C) + TV(B,D) >= TV(AxB, CxD).
    const double slack1 = tv(a, c) + tv(b, d) - tv_prod(a, b, c, d);
    // Same-reference lower bound: TV(AxB, CxC) >= TV(A,B)/2 (factors share
    // one alphabet; reuse size k1 for all four).
    const auto a2 = random_dist(k1), b2 = random_dist(k1), c2 = random_dist(k1);
    const double slack2 = tv_prod(a2, b2, c2, c2) - 0.5 * tv(a2, b2);
    worst1 = std::min(worst1, slack1);
    worst2 = std::min(worst2, slack2);
    if (slack1 >= -1e-12 && slack2 >= -1e-12) ++ok;
  }
  return {ok == trials,
          fmt("product-TV inequalities on %d/%d random discrete tuples "
              "(min subadditivity slack %.1e, min half-TV slack %.1e)",
              ok, trials, worst1, worst2)};
}

// --- 10: end-to-end detection error decay ----------------------------------

Outcome criterion_10() {
  const double t0 = now_s();
  const DetectionConfig cfg{make_standard_ensemble(4, 1.0), {64, 256, 1024},
                            std::nullopt,  // defaults to TV/4
                            Geometry{},    0.1, std::nullopt, std::nullopt};
  const ErrorSummary sum = estimate_error_probability(cfg, 1000, 110);
  bool bounded = true;
  std::string parts;
  for (const DetectionPoint& pt : sum.points) {
    if (pt.bound_total <= 1.0 && pt.total_error > pt.bound_total) bounded = false;
    parts += fmt(" (M=%d: err=%.3f bound=%s)", pt.m, pt.total_error,
                 pt.bound_total <= 1.0 ? fmt("%.3g", pt.bound_total).c_str()
                                       : ">1");
  }
  const double dt = now_s() - t0;
  const bool pass =
      bounded && sum.log_strictly_decreasing && sum.log_slope < 0.0 && dt < 600.0;
  return {pass,
          fmt("three-scenario detection at eps=%.4f:%s; log error strictly "
              "decreasing=%s, slope=%.2e per sample, %.0fs",
              sum.epsilon, parts.c_str(),
              sum.log_strictly_decreasing ? "yes" : "no", sum.log_slope, dt)};
}

// --- 11: brute-force certification -----------------------------------------

// Frequency-lattice evaluation of a branch-pair envelope kernel: all N
// photons of one component ride a single envelope frequency, so the kernel
// is the envelope average of cos(2 k theta) with theta the per-branch count
// of round-trip-shifted photons times the offsets.  Independent of the
// closed-form code path under test.
double lattice_delta(int p, int q, int big_q, double beta, int n, double y_est,
                     double y_fake) {
  const int crossed_bra = (p == 1) ? big_q : n - big_q;
  const int crossed_ket = (q == 1) ? big_q : n - big_q;
  double theta;
  if (p == q) {
    theta = crossed_bra * (y_est - y_fake);
  } else if (p == 1) {
    theta = y_est * big_q + y_fake * (n - big_q);
  } else {
    theta = y_est * (n - big_q) + y_fake * big_q;
  }
  const double el = 20.0 / beta;
  const double dk = 2.0 * M_PI / el;
  double num = 0.0, den = 0.0;
  for (int j = -2048; j < 2048; ++j) {
    const double k = dk * j;
    const double c2 = std::exp(-k * k / (beta * beta));
    if (c2 < 1e-30) continue;
    num += c2 * std::cos(2.0 * k * theta);
    den += c2;
  }
  return num / den;
}

Outcome criterion_11() {
  const double t0 = now_s();
  struct Check {
    const char* name;
    double max_err = 0.0;
    double tol = 0.0;
    int count = 0;
  };
  std::vector<Check> checks;

  {  // branch kernels vs the frequency-lattice average
    Check c{"delta kernels", 0.0, 1e-10, 100};
    for (int i = 0; i < 100; ++i) {
      Rng rng(derive_seed(111, 0, i));
      const int n = 1 + static_cast<int>(rng.uniform() * 12);
      const double beta = 0.8 + rng.uniform();
      const double y1 = (rng.uniform() - 0.5) * 2.4 / (n * beta);
      const double y2 = (rng.uniform() - 0.5) * 2.4 / (n * beta);
      const int big_q = static_cast<int>(rng.uniform() * (n + 1));
      const KernelParams par{beta, n, y2 - y1, n * y1};
      for (int p = 1; p <= 2; ++p)
        for (int q = 1; q <= 2; ++q) {
          const double fast = delta_pq(p, q, big_q, par);
          const double slow = lattice_delta(p, q, big_q, beta, n, y1, y2);
          c.max_err = std::max(c.max_err, std::abs(fast - slow));
        }
    }
    checks.push_back(c);
  }

  {  // binomially collapsed sum vs literal index-vector enumeration
    Check c{"q_sum", 0.0, 1e-10, 100};
    for (int i = 0; i < 100; ++i) {
      Rng rng(derive_seed(111, 1, i));
      const int n = 1 + static_cast<int>(rng.uniform() * 12);
      const Complex a(rng.uniform() * 0.9, (rng.uniform() - 0.5) * 0.4);
      const Complex b(rng.uniform() * 0.9, (rng.uniform() - 0.5) * 0.4);
      std::vector<double> kv(n + 1);
      for (double& v : kv) v = rng.uniform();
      const auto kernel = [&](int qq) { return kv[qq]; };
      const Complex fast = q_sum(QWeight(a, b), kernel, n);
      const Complex slow = oracle_index_sum(
          std::vector<std::pair<Complex, Complex>>(n, {a, b}), kernel);
      c.max_err = std::max(
          c.max_err, std::abs(fast - slow) / std::max(1.0, std::abs(slow)));
    }
    checks.push_back(c);
  }

  const auto draw_n = [](int i) { return i % 10 == 9 ? 3 : (i % 10 < 5 ? 1 : 2); };
  const auto grid_for = [](int n, double beta) {
    return n == 3 ? GridSpec(-10.0, 10.0, 1024) : GridSpec::default_for(beta);
  };

  {  // spoofed-state overlap vs configuration-space integration
    Check c{"attack_overlap", 0.0, 1e-6, 100};
    for (int i = 0; i < 100; ++i) {
      Rng rng(derive_seed(111, 2, i));
      const int n = draw_n(i);
      const double beta = n == 3 ? 0.95 + 0.5 * rng.uniform() : 0.7 + rng.uniform();
      const ProbeSpec probe = random_probe(n, beta, rng);
      const Unitary2 u = random_unitary(rng);
      const AttackStrategy strat{random_unitary(rng), random_unitary(rng),
                                 random_unitary(rng), random_unitary(rng)};
      const Mat2 up = effective_u(strat).m;
      const double y1 = (rng.uniform() - 0.5) * 0.5;
      const double y2 = y1 + (rng.uniform() - 0.5) * 0.2;
      const Complex fast = attack_overlap(u, up, probe, y1, y2);
      const Complex slow = oracle_overlap(u, up, probe, y1, y2, grid_for(n, beta));
      c.max_err = std::max(c.max_err, std::abs(fast - slow));
    }
    checks.push_back(c);
  }

  {  // honest fidelity vs configuration-space integration
    Check c{"honest_fidelity", 0.0, 1e-6, 100};
    for (int i = 0; i < 100; ++i) {
      Rng rng(derive_seed(111, 3, i));
      const int n = draw_n(i);
      const double beta = n == 3 ? 0.95 + 0.5 * rng.uniform() : 0.7 + rng.uniform();
      const ProbeSpec probe = random_probe(n, beta, rng);
      const Unitary2 u = random_unitary(rng);
      const double y = (rng.uniform() - 0.5) * 0.5;
      const double dy = (rng.uniform() - 0.5) * 0.2;
      const Complex fast = honest_fidelity(u, probe, y, dy);
      const Complex slow =
          oracle_overlap(u, u.mat(), probe, y, y + dy, grid_for(n, beta));
      c.max_err = std::max(c.max_err, std::abs(fast - slow));
    }
    checks.push_back(c);
  }

  {  // detection-density moments vs the explicit single-photon density
    Check c{"measurement density", 0.0, 1e-6, 100};
    for (int i = 0; i < 100; ++i) {
      Rng rng(derive_seed(111, 4, i));
      const double beta = 0.8 + rng.uniform();
      double err = 0.0;
      if (i % 4 == 0) {
        // General probe, general offset: exact port mass closed form.
        const ProbeSpec probe = random_probe(1, beta, rng);
        const double y = (rng.uniform() - 0.5) * 0.8;
        const auto d =
            oracle_measurement_density(probe, y, GridSpec::default_for(beta));
        const double g = std::exp(-beta * beta * y * y);
        const double cross =
            2.0 * (probe.psi_l() * std::conj(probe.psi_r())).real();
        const double want =
            0.25 * (std::norm(probe.psi_l()) * (2.0 + 2.0 * g) +
                    std::norm(probe.psi_r()) * (2.0 - 2.0 * g) +
                    cross * (std::pow(g, 4) - 1.0));
        err = std::max(std::abs(d.port_mass(0) - want),
                       std::abs(d.port_mass(1) - (d.total_mass() - want)));
      } else if (i % 4 == 1) {
        // Zero offset: the reduced sampling model is exact.
        const ProbeSpec probe = random_probe(1, beta, rng);
        const auto d =
            oracle_measurement_density(probe, 0.0, GridSpec::default_for(beta));
        const PortDensity red = honest_port_density(probe, 0.0);
        for (int port = 0; port < 2; ++port) {
          err = std::max(err, std::abs(d.port_mass(port) - red.w[port]));
          if (red.w[port] > 1e-6) {
            err = std::max(err, std::abs(d.port_mean(port) - red.mu[port]));
            err = std::max(err,
                           std::abs(d.port_variance(port) - red.sd * red.sd));
          }
        }
      } else {
        // One-sided probe at any offset: near-port mass (1+g)/2, mean -y,
        // variance 1/(2b^2) + y^2/(1+g), with g = e^{-b^2 y^2}.
        const double y = (rng.uniform() - 0.5) * 0.8;
        const ProbeSpec probe(1, beta, std::polar(1.0, rng.uniform() * 6.28), 0.0);
        const auto d =
            oracle_measurement_density(probe, y, GridSpec::default_for(beta));
        const double g = std::exp(-beta * beta * y * y);
        err = std::max({std::abs(d.port_mass(0) - 0.5 * (1.0 + g)),
                        std::abs(d.port_mean(0) + y),
                        std::abs(d.port_variance(0) - 0.5 / (beta * beta) -
                                 y * y / (1.0 + g))});
      }
      c.max_err = std::max(c.max_err, err);
    }
    checks.push_back(c);
  }

  bool pass = true;
  std::string parts;
  for (const Check& c : checks) {
    const bool ok = c.max_err <= c.tol;
    pass = pass && ok;
    parts += fmt(" %s: %.2g%s", c.name, c.max_err, ok ? "" : " EXCEEDS");
  }
  const double dt = now_s() - t0;
  return {pass, fmt("brute-force certification, 100 instances per check, max "
                    "errs:%s, %.0fs",
                    parts.c_str(), dt)};
}

using CriterionFn = Outcome (*)();
const CriterionFn kCriteria[] = {criterion_1, criterion_2, criterion_3,
                                 criterion_4, criterion_5, criterion_6,
                                 criterion_7, criterion_8, criterion_9,
                                 criterion_10, criterion_11};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion <1..11>]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 11) {
    std::fprintf(stderr, "criterion index must be in 1..11\n");
    return 2;
  }

  int failures = 0;
  for (int k = 1; k <= 11; ++k) {
    if (only != 0 && k != only) continue;
    Outcome o;
    try {
      o = kCriteria[k - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", k,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
