#include "qrs/kernels.hpp"

#include <cmath>
#include <vector>

namespace qrs {

namespace {

void check_params(const KernelParams& p) {
  if (!(p.beta > 0.0) || p.n < 1)
    throw std::invalid_argument("KernelParams: need beta > 0 and n >= 1");
}

// z^k by repeated multiplication; small k, no polar branch cuts.
Complex ipow(Complex z, int k) {
  Complex r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

}  // namespace

double delta_pq(int p, int q, int big_q, const KernelParams& params) {
  check_params(params);
  if (p < 1 || p > 2 || q < 1 || q > 2)
    throw std::invalid_argument("delta_pq: branch indices must be 1 or 2");
  if (big_q < 0 || big_q > params.n)
    throw std::invalid_argument("delta_pq: need 0 <= Q <= n");
  const double b2 = params.beta * params.beta;
  const double nq = static_cast<double>(params.n - big_q);
  const double qq = static_cast<double>(big_q);
  double arg;
  if (p == 1 && q == 1)
    arg = qq * params.dy;
  else if (p == 2 && q == 2)
    arg = nq * params.dy;
  else if (p == 1 && q == 2)
    arg = params.dy * nq + params.y_shift;
  else
    arg = params.dy * qq + params.y_shift;
  return std::exp(-b2 * arg * arg);
}

QWeight::QWeight(Complex a_, Complex b_) : a(a_), b(b_) {
  if (std::abs(a) > 1.0 + 1e-12 || std::abs(b) > 1.0 + 1e-12)
    throw std::invalid_argument("QWeight: per-photon factors must have magnitude <= 1");
}

Complex q_sum(const QWeight& w, const std::function<double(int)>& kernel, int n) {
  if (n < 1) throw std::invalid_argument("q_sum: n must be >= 1");
  if (n <= 64) {
    // Power tables by repeated multiplication, exact binomials.
    std::vector<Complex> ap(n + 1), bp(n + 1);
    ap[0] = bp[0] = 1.0;
    for (int i = 1; i <= n; ++i) {
      ap[i] = ap[i - 1] * w.a;
      bp[i] = bp[i - 1] * w.b;
    }
    Complex acc = 0.0;
    for (int q = 0; q <= n; ++q)
      acc += binomial(n, q) * ap[n - q] * bp[q] * kernel(q);
    return acc;
  }
  // Beyond exact-binomial range: log-space magnitudes with explicit phase
  // accumulation.  |a|,|b| <= 1 keeps every term's magnitude <= C(n,q), so
  // only the binomial needs log handling.
  const double la = std::abs(w.a) > 0.0 ? std::log(std::abs(w.a)) : 0.0;
  const double lb = std::abs(w.b) > 0.0 ? std::log(std::abs(w.b)) : 0.0;
  const double pa = std::arg(w.a), pb = std::arg(w.b);
  const bool a_zero = std::abs(w.a) == 0.0, b_zero = std::abs(w.b) == 0.0;
  Complex acc = 0.0;
  const double lg = std::lgamma(n + 1.0);
  for (int q = 0; q <= n; ++q) {
    if ((a_zero && q != n) || (b_zero && q != 0)) continue;
    const double logmag = lg - std::lgamma(q + 1.0) - std::lgamma(n - q + 1.0) +
                          (n - q) * la + q * lb;
    const double phase = (n - q) * pa + q * pb;
    acc += std::polar(std::exp(logmag), phase) * kernel(q);
  }
  return acc;
}

Complex attack_overlap_cross(const Unitary2& u, const Mat2& u_prime,
                             const ProbeSpec& bra, const ProbeSpec& ket,
                             double y_est, double y_fake) {
  if (bra.n() != ket.n() || bra.beta() != ket.beta())
    throw std::invalid_argument("attack_overlap_cross: probes must share n and beta");
  for (int c = 0; c < 2; ++c)
    if (u_prime.col_norm(c) > 1.0 + 1e-9)
      throw std::invalid_argument(
          "attack_overlap: u_prime column norm exceeds 1 (unphysical channel)");
  const int n = bra.n();
  const KernelParams params{bra.beta(), n, y_fake - y_est,
                            static_cast<double>(n) * y_est};
  const Complex psi_bra[2] = {bra.psi_l(), bra.psi_r()};
  const Complex psi_ket[2] = {ket.psi_l(), ket.psi_r()};
  Complex acc = 0.0;
  for (int p = 0; p < 2; ++p) {
    for (int q = 0; q < 2; ++q) {
      const QWeight w(std::conj(u.at(0, p)) * u_prime.at(0, q),
                      std::conj(u.at(1, p)) * u_prime.at(1, q));
      auto kernel = [&](int big_q) {
        return delta_pq(p + 1, q + 1, big_q, params);
      };
      acc += std::conj(psi_bra[p]) * psi_ket[q] * q_sum(w, kernel, n);
    }
  }
  return acc;
}

Complex attack_overlap(const Unitary2& u, const Mat2& u_prime,
                       const ProbeSpec& probe, double y_est, double y_fake) {
  return attack_overlap_cross(u, u_prime, probe, probe, y_est, y_fake);
}

Complex honest_fidelity(const Unitary2& u, const ProbeSpec& probe, double y,
                        double dy) {
  return attack_overlap(u, u.mat(), probe, y, y + dy);
}

}  // namespace qrs
