#pragma once
// Analytic overlap machinery for the two-rail N-photon probes: the Gaussian
// pulse-overlap kernels, the binomially collapsed sum over mode-index
// vectors, and the honest/cheater state overlaps built from them.  These are
// the closed-form counterparts of the brute-force routines in oracle.hpp.

#include <functional>

#include "qrs/core.hpp"

namespace qrs {

// Parameters shared by the four overlap kernels.  dy is the offset between
// ket and bra reflection points; y_shift is the N-scaled reference offset
// entering the cross-branch kernels (callers pass N * y_est).
struct KernelParams {
  double beta;
  int n;
  double dy;
  double y_shift;
};

// Gaussian kernel for branch pair (p, q) in {1, 2}^2 at photon split Q
// (Q = number of photons on the second output port):
//   d11 = exp(-b^2 Q^2 dy^2)          d12 = exp(-b^2 [dy (N-Q) + y_shift]^2)
//   d21 = exp(-b^2 [dy Q + y_shift]^2) d22 = exp(-b^2 (N-Q)^2 dy^2)
double delta_pq(int p, int q, int big_q, const KernelParams& params);

// Per-photon transfer factors: a multiplies photons with mode index 0, b
// those with index 1.  Each is a product of unit-bounded matrix entries,
// hence the magnitude check at construction.
struct QWeight {
  Complex a;
  Complex b;
  QWeight(Complex a_, Complex b_);
};

// Sum_{Q=0}^{n} C(n,Q) a^{n-Q} b^Q kernel(Q) -- the collapse of the sum over
// all 2^n mode-index vectors onto the count Q of ones.  Exact 128-bit
// binomials for n <= 64; log-magnitude with explicit phase tracking beyond,
// so large n never silently overflows.
Complex q_sum(const QWeight& w, const std::function<double(int)>& kernel, int n);

// Overlap <phi(y_est) | gamma(y_fake)> between the honest output state
// (unitary u) and a cheater output state (transfer matrix u_prime, column
// norms <= 1): four q_sum terms weighted by conj(psi_p) psi_q with the
// matching delta kernels at dy = y_fake - y_est, y_shift = N * y_est.
Complex attack_overlap(const Unitary2& u, const Mat2& u_prime,
                       const ProbeSpec& probe, double y_est, double y_fake);

// Same contraction with different bra and ket rail amplitudes (probes must
// share n and beta).  Used for Gram matrices of honest states; reduces to
// attack_overlap when bra == ket.
Complex attack_overlap_cross(const Unitary2& u, const Mat2& u_prime,
                             const ProbeSpec& bra, const ProbeSpec& ket,
                             double y_est, double y_fake);

// Honest fidelity <phi_y | phi_{y+dy}>: the u_prime = u, y_fake = y + dy
// special case, kept as a wrapper so the two paths cannot drift apart.
Complex honest_fidelity(const Unitary2& u, const ProbeSpec& probe, double y,
                        double dy);

}  // namespace qrs
