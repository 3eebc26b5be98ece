#include "qrs/metrology.hpp"

#include <cmath>

#include "qrs/kernels.hpp"

namespace qrs {

namespace {

// Shared small-step default: the fidelity curvature scales like (beta N)^2,
// so a step ~1e-3/(beta N) keeps the truncation term and the cancellation
// error in 1 - |overlap| both far below the 1e-6 relative targets.
double default_step(const ProbeSpec& probe) {
  return 1e-3 / (probe.beta() * probe.n());
}

}  // namespace

double qfi_fd_single_step(const Unitary2& u, const ProbeSpec& probe, double y,
                          double dy) {
  if (!(dy > 0.0) || !std::isfinite(dy)) {
    throw std::invalid_argument("qfi_fd_single_step: dy must be positive");
  }
  // Centre the overlap stencil on y so the fidelity expansion is even in dy;
  // a forward stencil would pick up a linear error term wherever the
  // information itself varies with y.
  const double fid = std::abs(honest_fidelity(u, probe, y - dy / 2.0, dy));
  double f = 8.0 * (1.0 - fid) / (dy * dy);
  if (!std::isfinite(f)) {
    throw NumericError("qfi_fd_single_step: non-finite estimate");
  }
  // 1 - |overlap| can dip a few ulps below 0 at dy -> 0; clamp rather than
  // return a tiny negative information.
  return f < 0.0 ? 0.0 : f;
}

QfiResult qfi_finite_difference(const Unitary2& u, const ProbeSpec& probe,
                                double y, std::optional<double> dy) {
  const double step = dy.value_or(default_step(probe));
  QfiResult out;
  out.method = QfiMethod::finite_difference;
  // Truncation is O(dy^2) with a curvature coefficient ~ (beta N^2)^2, so a
  // step with dy * beta * N^2 > 0.1 is suspect even after extrapolation.
  out.step_warning = step * probe.beta() * probe.n() * probe.n() > 0.1;
  const double f_full = qfi_fd_single_step(u, probe, y, step);
  const double f_half = qfi_fd_single_step(u, probe, y, step / 2.0);
  // Richardson step for an O(dy^2) leading error term.
  double f = (4.0 * f_half - f_full) / 3.0;
  out.value = f < 0.0 ? 0.0 : f;
  return out;
}

QfiResult qfi_closed_form_balanced(const ProbeSpec& probe) {
  const double n = probe.n();
  QfiResult out;
  out.method = QfiMethod::closed_form;
  out.value = 2.0 * n * (n + 1.0) * probe.beta() * probe.beta();
  return out;
}

QfiResult qfi_closed_form_single_sided(const ProbeSpec& probe) {
  if (std::abs(probe.psi_l()) < 1.0 - 1e-9) {
    throw std::invalid_argument(
        "qfi_closed_form_single_sided: probe must live on the left rail "
        "(|psi_l| = 1)");
  }
  const double n = probe.n();
  QfiResult out;
  out.method = QfiMethod::closed_form;
  out.value = 8.0 * probe.beta() * probe.beta() * n * n;
  return out;
}

QfiResult qfi_general_expression(const Unitary2& u, const ProbeSpec& probe,
                                 double y) {
  const int n = probe.n();
  const double beta = probe.beta();
  const double b2 = beta * beta;
  const double ny = n * y;
  const double gauss = std::exp(-b2 * ny * ny);  // e^{-beta^2 N^2 y^2}

  const Complex u00 = u.at(0, 0), u01 = u.at(0, 1);
  const Complex u10 = u.at(1, 0), u11 = u.at(1, 1);
  const Complex wc = std::conj(probe.psi_l()) * probe.psi_r();

  const auto poly = [n](auto&& f) {
    return std::function<double(int)>(
        [n, f](int big_q) { return f(big_q, n); });
  };
  const auto k_nmq = poly([](int q, int nn) { return double(nn - q); });
  const auto k_q = poly([](int q, int) { return double(q); });
  const auto k_q2 = poly([](int q, int) { return double(q) * q; });
  const auto k_nmq2 = poly([](int q, int nn) {
    const double r = nn - q;
    return r * r;
  });
  const auto k_sum2 = poly([](int q, int nn) {
    const double r = nn - q;
    return r * r + double(q) * q;
  });

  // First-moment contraction: the derivative of the cross-branch phase pulls
  // down one factor of (N - Q) from the ket-side kernel and Q from the
  // bra-side one.
  const QWeight w_lr(std::conj(u00) * u01, std::conj(u10) * u11);
  const QWeight w_rl(std::conj(u01) * u00, std::conj(u11) * u10);
  const Complex a_term =
      wc * q_sum(w_lr, k_nmq, n) + std::conj(wc) * q_sum(w_rl, k_q, n);

  // Second-moment contractions.
  const QWeight w_ll(std::norm(u00), std::norm(u10));
  const QWeight w_rr(std::norm(u01), std::norm(u11));
  const Complex cross = wc * q_sum(w_lr, k_sum2, n);

  const double b_term =
      std::norm(probe.psi_l()) * 2.0 * b2 * std::real(q_sum(w_ll, k_q2, n)) +
      std::norm(probe.psi_r()) * 2.0 * b2 * std::real(q_sum(w_rr, k_nmq2, n)) +
      2.0 * std::real(cross) * gauss * b2 * (1.0 - 2.0 * b2 * ny * ny);

  QfiResult out;
  out.method = QfiMethod::closed_form;
  out.value = -16.0 * gauss * gauss * double(n) * n * y * y * b2 * b2 *
                  std::norm(a_term) +
              4.0 * b_term;
  if (!std::isfinite(out.value)) {
    throw NumericError("qfi_general_expression: non-finite result");
  }
  return out;
}

QfiResult fi_closed_form_measurement(const ProbeSpec& probe) {
  const double n = probe.n();
  QfiResult out;
  out.method = QfiMethod::closed_form;
  out.value = 2.0 * probe.beta() * probe.beta() * n * n;
  return out;
}

}  // namespace qrs
