// qranger: batch experiment runner for the two-rail ranging simulator.
// Subcommands sweep the information quantities (qfi, fi), the cheater
// optimizer and bounds (attack), the Monte Carlo detection protocol (detect),
// and the brute-force certification suite (oracle-check).  Machine output
// goes to CSV/JSON files under --out; progress goes to stderr.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrs/attack.hpp"
#include "qrs/core.hpp"
#include "qrs/detection.hpp"
#include "qrs/kernels.hpp"
#include "qrs/metrology.hpp"
#include "qrs/oracle.hpp"
#include "qrs/rng.hpp"

namespace {

using nlohmann::json;
using namespace qrs;

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 20260823ull;
  int trials = 0;  // 0 = subcommand default
  int threads = 1;
};

// RFC 4180 CSV: CRLF record separators, quotes only where required.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) {
      throw std::invalid_argument("cannot open output file: " + path.string());
    }
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quoted(fields[i]);
    }
    out_ << "\r\n";
  }

 private:
  static std::string quoted(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }

  std::ofstream out_;
};

std::string fmt(double v) {
  if (std::isnan(v)) throw NumericError("NaN in output table");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(int v) { return std::to_string(v); }

std::string fmt(const Complex& z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

json load_section(const CommonOpts& opts, const std::string& command) {
  if (opts.config_path.empty()) return json::object();
  std::ifstream in(opts.config_path);
  if (!in) {
    throw std::invalid_argument("cannot read config file: " + opts.config_path);
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("config root must be a JSON object");
  }
  return doc.value(command, json::object());
}

std::filesystem::path out_file(const CommonOpts& opts, const std::string& name) {
  std::filesystem::create_directories(opts.out_dir);
  return std::filesystem::path(opts.out_dir) / name;
}

ProbeSpec random_probe(int n, double beta, Rng& rng) {
  // Haar-ish rail amplitudes: two complex Gaussians, normalized.
  const Complex a(rng.normal(), rng.normal());
  const Complex b(rng.normal(), rng.normal());
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return ProbeSpec(n, beta, a / norm, b / norm);
}

Unitary2 random_unitary(Rng& rng) {
  return u2_from_angles((2.0 * rng.uniform() - 1.0) * M_PI,
                        (2.0 * rng.uniform() - 1.0) * M_PI,
                        rng.uniform() * M_PI_2,
                        (2.0 * rng.uniform() - 1.0) * M_PI);
}

int cmd_qfi(const CommonOpts& opts) {
  const json cfg = load_section(opts, "qfi");
  const int n_min = cfg.value("n_min", 1);
  const int n_max = cfg.value("n_max", 20);
  const std::vector<double> betas =
      cfg.value("betas", std::vector<double>{0.5, 1.0, 2.0});
  const double y_range = cfg.value("y_range", 2.0);
  if (n_min < 1 || n_max < n_min) {
    throw std::invalid_argument("qfi: need 1 <= n_min <= n_max");
  }

  CsvWriter csv(out_file(opts, "qfi.csv"));
  csv.row({"n", "beta", "psi_l", "psi_r", "y", "f_closed", "f_finite_diff",
           "rel_err", "single_sided_over_balanced"});
  const Unitary2 u = make_balanced();
  double worst = 0.0;
  for (std::size_t bi = 0; bi < betas.size(); ++bi) {
    for (int n = n_min; n <= n_max; ++n) {
      Rng rng(derive_seed(opts.seed, bi, static_cast<std::uint64_t>(n)));
      const ProbeSpec probe = random_probe(n, betas[bi], rng);
      const double y = (2.0 * rng.uniform() - 1.0) * y_range;
      const double closed = qfi_closed_form_balanced(probe).value;
      const double fd = qfi_finite_difference(u, probe, y).value;
      const double rel = std::abs(fd - closed) / closed;
      worst = std::max(worst, rel);
      const double ratio =
          qfi_closed_form_single_sided(ProbeSpec(n, betas[bi], 1.0, 0.0))
              .value /
          closed;
      csv.row({fmt(n), fmt(betas[bi]), fmt(probe.psi_l()), fmt(probe.psi_r()),
               fmt(y), fmt(closed), fmt(fd), fmt(rel), fmt(ratio)});
    }
  }
  std::cerr << "qfi: " << betas.size() * (n_max - n_min + 1)
            << " rows, worst rel_err " << worst << "\n";
  return 0;
}

int cmd_fi(const CommonOpts& opts) {
  const json cfg = load_section(opts, "fi");
  std::vector<std::pair<int, double>> cells = {{1, 1.0}, {4, 1.0}, {4, 3.0}};
  if (cfg.contains("cells")) {
    cells.clear();
    for (const auto& c : cfg.at("cells")) {
      cells.emplace_back(c.at(0).get<int>(), c.at(1).get<double>());
    }
  }
  const int samples = opts.trials > 0 ? opts.trials : cfg.value("samples", 1000000);
  const double y = cfg.value("y", 0.0);

  CsvWriter csv(out_file(opts, "fi.csv"));
  csv.row({"n", "beta", "samples", "fi_closed", "fi_monte_carlo", "std_error",
           "z_score"});
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto [n, beta] = cells[i];
    const ProbeSpec probe(n, beta, std::sqrt(0.5), std::sqrt(0.5));
    Rng rng(derive_seed(opts.seed, 0xf1, i));
    const QfiResult mc = fi_monte_carlo_score(probe, y, samples, rng);
    const double closed = fi_closed_form_measurement(probe).value;
    const double z = (mc.value - closed) / mc.stderr_estimate.value();
    csv.row({fmt(n), fmt(beta), fmt(samples), fmt(closed), fmt(mc.value),
             fmt(mc.stderr_estimate.value()), fmt(z)});
    std::cerr << "fi: n=" << n << " beta=" << beta << " z=" << z << "\n";
  }
  return 0;
}

int cmd_attack(const CommonOpts& opts) {
  const json cfg = load_section(opts, "attack");
  const std::vector<int> n_values =
      cfg.value("n_values", std::vector<int>{2, 4, 8, 16, 32});
  const double beta = cfg.value("beta", 1.0);
  const int budget = cfg.value("budget", 2000);
  const int restarts = cfg.value("restarts", 32);
  const double y_est = cfg.value("y_est", 0.0);
  const double y_fake = cfg.value("y_fake", y_est);
  const std::string uname = cfg.value("unitary", std::string("balanced"));
  Unitary2 u = make_balanced();
  if (uname == "reflection") {
    u = make_reflection();
  } else if (uname != "balanced") {
    throw std::invalid_argument("attack: unitary must be balanced|reflection");
  }

  CsvWriter csv(out_file(opts, "attack.csv"));
  csv.row({"n", "best_fidelity", "p1_bound", "p2_upper", "p2_lower",
           "p2_forgery"});
  for (int n : n_values) {
    const Ensemble ens = make_standard_ensemble(n, beta);
    const OptimizeResult best =
        optimize_attack(u, ens, y_est, y_fake, budget, opts.seed, restarts);
    const BoundReport rep = bound_report(ens, u, y_est);
    csv.row({fmt(n), fmt(best.fidelity), fmt(rep.p1_upper), fmt(rep.p2_upper),
             fmt(rep.p2_lower), fmt(rep.p2_exact_for_measurement)});
    std::cerr << "attack: n=" << n << " best=" << best.fidelity
              << " (restart " << best.best_restart << ")\n";
  }
  return 0;
}

int cmd_detect(const CommonOpts& opts) {
  const json cfg = load_section(opts, "detect");
  const int n = cfg.value("n", 4);
  const double beta = cfg.value("beta", 1.0);
  const int trials = opts.trials > 0 ? opts.trials : cfg.value("trials", 1000);
  DetectionConfig dc{make_standard_ensemble(n, beta),
                     cfg.value("m_values", std::vector<int>{64, 256, 1024}),
                     std::nullopt,
                     Geometry{},
                     cfg.value("exclusion_overhead", 0.1),
                     std::nullopt,
                     std::nullopt};
  if (cfg.contains("epsilon")) dc.epsilon = cfg.at("epsilon").get<double>();
  dc.geometry.y_true = cfg.value("y_true", 0.0);
  dc.geometry.y_est = cfg.value("y_est", 0.0);
  dc.geometry.y_fake = cfg.value("y_fake", 0.0);

  std::cerr << "detect: " << trials << " trials x 3 scenarios x "
            << dc.m_values.size() << " sample counts\n";
  const ErrorSummary summary = estimate_error_probability(dc, trials, opts.seed);

  CsvWriter csv(out_file(opts, "detect.csv"));
  csv.row({"m", "false_alarm", "miss_attack", "miss_forge", "total_error",
           "bound_false_alarm", "bound_total", "exponents_valid", "xi1", "xi2"});
  for (const auto& p : summary.points) {
    csv.row({fmt(p.m), fmt(p.false_alarm), fmt(p.miss_attack),
             fmt(p.miss_forge), fmt(p.total_error), fmt(p.bound_false_alarm),
             fmt(p.bound_total), p.exponents_valid ? "true" : "false",
             fmt(p.exponents.xi1), fmt(p.exponents.xi2)});
  }

  json out{{"epsilon", summary.epsilon},
           {"log_slope", summary.log_slope},
           {"log_strictly_decreasing", summary.log_strictly_decreasing},
           {"points", json::array()}};
  for (const auto& p : summary.points) {
    out["points"].push_back({{"m", p.m},
                             {"total_error", p.total_error},
                             {"bound_total", p.bound_total},
                             {"tv12", p.exponents.tv12},
                             {"t1", p.exponents.t1},
                             {"t2", p.exponents.t2},
                             {"xi1_valid", p.exponents.xi1_valid},
                             {"xi2_valid", p.exponents.xi2_valid}});
  }
  std::ofstream js(out_file(opts, "detect_summary.json"), std::ios::binary);
  js << out.dump(2) << "\n";
  std::cerr << "detect: log slope " << summary.log_slope << "\n";
  return 0;
}

int cmd_oracle_check(const CommonOpts& opts) {
  const json cfg = load_section(opts, "oracle-check");
  const int instances = opts.trials > 0 ? opts.trials : cfg.value("instances", 25);
  const int max_quadrature_n = cfg.value("max_quadrature_n", 2);

  CsvWriter csv(out_file(opts, "oracle_check.csv"));
  csv.row({"check", "instances", "max_err", "tolerance", "pass"});
  bool all_pass = true;
  const auto report = [&](const std::string& name, int count, double err,
                          double tol) {
    const bool pass = err <= tol;
    all_pass = all_pass && pass;
    csv.row({name, fmt(count), fmt(err), fmt(tol), pass ? "true" : "false"});
    std::cerr << "oracle-check: " << name << " max_err=" << err
              << (pass ? " ok" : " FAILED") << "\n";
  };

  {  // q_sum against literal index-vector enumeration
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      Rng rng(derive_seed(opts.seed, 0x0a, i));
      const int n = 1 + static_cast<int>(rng.uniform() * 12);
      const Complex a(rng.uniform() * 0.9, (rng.uniform() - 0.5) * 0.4);
      const Complex b(rng.uniform() * 0.9, (rng.uniform() - 0.5) * 0.4);
      std::vector<double> kernel_vals(n + 1);
      for (double& v : kernel_vals) v = rng.uniform();
      const auto kernel = [&](int q) { return kernel_vals[q]; };
      const Complex fast = q_sum(QWeight(a, b), kernel, n);
      const Complex slow = oracle_index_sum(
          std::vector<std::pair<Complex, Complex>>(n, {a, b}), kernel);
      worst = std::max(worst,
                       std::abs(fast - slow) / std::max(1.0, std::abs(slow)));
    }
    report("q_sum_vs_index_enumeration", instances, worst, 1e-10);
  }

  {  // analytic overlaps against position-grid quadrature
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      Rng rng(derive_seed(opts.seed, 0x0b, i));
      const int n = 1 + static_cast<int>(rng.uniform() * max_quadrature_n);
      const double beta = 0.7 + rng.uniform();
      const ProbeSpec probe = random_probe(n, beta, rng);
      const Unitary2 u = random_unitary(rng);
      const AttackStrategy strat{random_unitary(rng), random_unitary(rng),
                                 random_unitary(rng), random_unitary(rng)};
      const Mat2 up = effective_u(strat).m;
      const double y_est = (rng.uniform() - 0.5) * 0.8;
      const double y_fake = y_est + (rng.uniform() - 0.5) * 0.4;
      const Complex fast = attack_overlap(u, up, probe, y_est, y_fake);
      const Complex slow = oracle_overlap(u, up, probe, y_est, y_fake,
                                          GridSpec::default_for(beta));
      worst = std::max(worst, std::abs(fast - slow));
    }
    report("attack_overlap_vs_quadrature", instances, worst, 1e-6);
  }

  {  // honest fidelity against quadrature
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      Rng rng(derive_seed(opts.seed, 0x0c, i));
      const double beta = 0.7 + rng.uniform();
      const ProbeSpec probe = random_probe(1 + (i % 2), beta, rng);
      const Unitary2 u = random_unitary(rng);
      const double y = (rng.uniform() - 0.5) * 0.8;
      const double dy = 0.05 + 0.1 * rng.uniform();
      const Complex fast = honest_fidelity(u, probe, y, dy);
      const Complex slow = oracle_overlap(u, u.mat(), probe, y, y + dy,
                                          GridSpec::default_for(beta));
      worst = std::max(worst, std::abs(fast - slow));
    }
    report("honest_fidelity_vs_quadrature", instances, worst, 1e-6);
  }

  {  // reduced sampling density against the explicit single-photon density
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
      Rng rng(derive_seed(opts.seed, 0x0d, i));
      const double beta = 0.8 + rng.uniform();
      const ProbeSpec probe = random_probe(1, beta, rng);
      const auto density = oracle_measurement_density(
          probe, 0.0, GridSpec::default_for(beta));
      const PortDensity reduced = honest_port_density(probe, 0.0);
      for (int port = 0; port < 2; ++port) {
        worst = std::max(worst,
                         std::abs(density.port_mass(port) - reduced.w[port]));
        if (reduced.w[port] > 1e-6) {
          worst = std::max(worst, std::abs(density.port_mean(port)));
          worst = std::max(worst, std::abs(density.port_variance(port) -
                                           reduced.sd * reduced.sd));
        }
      }
    }
    report("measurement_density_vs_reduced_model", instances, worst, 1e-6);
  }

  if (!all_pass) {
    throw NumericError("oracle-check: at least one certification failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and bounds-checker for two-rail interferometric "
               "ranging with cheat detection"};
  app.require_subcommand(1);

  CommonOpts opts;
  const auto add_common = [&opts](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config file");
    sub->add_option("--seed", opts.seed, "master RNG seed");
    sub->add_option("--out", opts.out_dir, "output directory");
    sub->add_option("--trials", opts.trials,
                    "trial/sample count override (command-specific)");
    sub->add_option("--threads", opts.threads,
                    "worker threads (results are worker-count independent)")
        ->check(CLI::PositiveNumber);
  };

  int (*handlers[])(const CommonOpts&) = {cmd_qfi, cmd_fi, cmd_attack,
                                          cmd_detect, cmd_oracle_check};
  const char* names[] = {"qfi", "fi", "attack", "detect", "oracle-check"};
  const char* descs[] = {
      "sweep closed-form vs finite-difference information",
      "Monte Carlo measurement Fisher information",
      "optimize cheater strategies and tabulate the error bounds",
      "run the two-step detection protocol across sample counts",
      "certify analytic kernels against brute-force references"};
  CLI::App* subs[5];
  for (int i = 0; i < 5; ++i) {
    subs[i] = app.add_subcommand(names[i], descs[i]);
    add_common(subs[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    for (int i = 0; i < 5; ++i) {
      if (subs[i]->parsed()) return handlers[i](opts);
    }
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qrs::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
