#include "qrs/core.hpp"

#include <cmath>
#include <cstdint>

namespace qrs {

namespace {

constexpr double kUnitaryTol = 1e-12;
constexpr double kNormTol = 1e-12;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

double Mat2::col_norm(int c) const {
  return std::sqrt(std::norm(m[0][c]) + std::norm(m[1][c]));
}

Complex Mat2::col_dot(int a, int b) const {
  return std::conj(m[0][a]) * m[0][b] + std::conj(m[1][a]) * m[1][b];
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
  Mat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j];
  return r;
}

Unitary2::Unitary2(Complex a00, Complex a01, Complex a10, Complex a11)
    : Unitary2(Mat2(a00, a01, a10, a11)) {}

Unitary2::Unitary2(const Mat2& m) : m_(m) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!finite(m.at(r, c)))
        throw std::invalid_argument("Unitary2: non-finite entry");
  // U^dag U == I, checked entrywise.
  const Complex g00 = m.col_dot(0, 0), g01 = m.col_dot(0, 1), g11 = m.col_dot(1, 1);
  if (std::abs(g00 - 1.0) > kUnitaryTol || std::abs(g11 - 1.0) > kUnitaryTol ||
      std::abs(g01) > kUnitaryTol)
    throw std::invalid_argument("Unitary2: matrix is not unitary (tol 1e-12)");
}

Unitary2 make_balanced() {
  const double s = 1.0 / std::sqrt(2.0);
  return Unitary2(s, s, -s, s);
}

Unitary2 make_reflection() { return Unitary2(0.0, 1.0, 1.0, 0.0); }

Unitary2 conjugate(const Unitary2& u) {
  return Unitary2(std::conj(u.at(0, 0)), std::conj(u.at(0, 1)),
                  std::conj(u.at(1, 0)), std::conj(u.at(1, 1)));
}

ProbeSpec::ProbeSpec(int n, double beta, Complex psi_l, Complex psi_r)
    : n_(n), beta_(beta), psi_l_(psi_l), psi_r_(psi_r) {
  if (n < 1) throw std::invalid_argument("ProbeSpec: n must be >= 1");
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("ProbeSpec: beta must be positive and finite");
  if (!finite(psi_l) || !finite(psi_r))
    throw std::invalid_argument("ProbeSpec: non-finite rail amplitude");
  const double norm2 = std::norm(psi_l) + std::norm(psi_r);
  if (std::abs(norm2 - 1.0) > kNormTol)
    throw std::invalid_argument("ProbeSpec: |psi_l|^2 + |psi_r|^2 must be 1 (tol 1e-12)");
  const double s = 1.0 / std::sqrt(norm2);
  psi_l_ *= s;
  psi_r_ *= s;
}

Complex probe_inner_product(const ProbeSpec& a, const ProbeSpec& b) {
  if (a.n() != b.n() || a.beta() != b.beta())
    throw std::invalid_argument("probe_inner_product: probes must share n and beta");
  return std::conj(a.psi_l()) * b.psi_l() + std::conj(a.psi_r()) * b.psi_r();
}

Ensemble::Ensemble(std::vector<double> weights, std::vector<ProbeSpec> probes)
    : weights_(std::move(weights)), probes_(std::move(probes)) {
  if (probes_.empty() || weights_.size() != probes_.size())
    throw std::invalid_argument("Ensemble: need matching, non-empty weight/probe lists");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("Ensemble: weights must be positive and finite");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kNormTol)
    throw std::invalid_argument("Ensemble: weights must sum to 1 (tol 1e-12)");
  for (double& w : weights_) w /= sum;
  for (const ProbeSpec& p : probes_)
    if (p.n() != probes_.front().n() || p.beta() != probes_.front().beta())
      throw std::invalid_argument("Ensemble: probes must share n and beta");
}

Ensemble make_standard_ensemble(int n, double beta) {
  const double a = std::sqrt(3.0) / 2.0, b = 0.5;
  return Ensemble({0.5, 0.5},
                  {ProbeSpec(n, beta, a, b), ProbeSpec(n, beta, b, a)});
}

double binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial: need 0 <= k <= n");
  if (k > n - k) k = n - k;
  if (n <= 64) {
    // Exact multiplicative recurrence: r after step i equals C(n-k+i, i), so
    // the division is always exact.  The pre-division product can exceed
    // 2^64 near C(64, 32) ~ 1.8e18, hence 128-bit intermediates.
    unsigned __int128 r = 1;
    for (int i = 1; i <= k; ++i)
      r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    return static_cast<double>(static_cast<std::uint64_t>(r));
  }
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace qrs
