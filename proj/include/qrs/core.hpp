#pragma once
// Core value types for the ranging simulator: 2x2 rail transforms, probe
// pulses, probe ensembles and protocol geometry.  Everything here is immutable
// after construction and validated on entry, so the numerical modules can
// assume well-formed inputs and fail loudly otherwise.

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrs {

using Complex = std::complex<double>;

// Thrown when a numeric routine produces NaN/Inf or cannot reach its accuracy
// target.  Configuration and precondition violations throw
// std::invalid_argument instead; the CLI maps the two classes to distinct
// exit codes.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plain 2x2 complex matrix acting on the two rail modes (index 0 = left,
// 1 = right).  Carries no invariant: attack channels are represented by
// sub-normalized columns, so this is the general transfer-matrix type.
struct Mat2 {
  Complex m[2][2]{};

  Mat2() = default;
  Mat2(Complex a00, Complex a01, Complex a10, Complex a11)
      : m{{a00, a01}, {a10, a11}} {}

  Complex at(int r, int c) const { return m[r][c]; }
  // Euclidean norm of column c.
  double col_norm(int c) const;
  // Hermitian inner product of columns: <col_a, col_b>.
  Complex col_dot(int a, int b) const;
};

Mat2 operator*(const Mat2& a, const Mat2& b);

// A 2x2 matrix validated to be unitary at construction (tolerance 1e-12 on
// U^dag U = I).  Convertible to Mat2 for routines that accept general
// transfer matrices.
class Unitary2 {
 public:
  Unitary2(Complex a00, Complex a01, Complex a10, Complex a11);
  explicit Unitary2(const Mat2& m);

  Complex at(int r, int c) const { return m_.at(r, c); }
  const Mat2& mat() const { return m_; }
  operator const Mat2&() const { return m_; }

 private:
  Mat2 m_;
};

// The balanced combiner (1/sqrt2) [[1, 1], [-1, 1]].
Unitary2 make_balanced();
// The pure mirror [[0, 1], [1, 0]]: everything is sent to the other rail.
Unitary2 make_reflection();
// Entrywise complex conjugate (used for the detector-side combiner, which is
// the conjugate of the probe-side one).
Unitary2 conjugate(const Unitary2& u);

// An N-photon two-rail probe with Gaussian spectral envelope of width beta
// and rail amplitudes (psi_l, psi_r).  Validated: n >= 1, beta > 0, and
// |psi_l|^2 + |psi_r|^2 = 1 within 1e-12 (stored renormalized to machine
// precision).
class ProbeSpec {
 public:
  ProbeSpec(int n, double beta, Complex psi_l, Complex psi_r);

  int n() const { return n_; }
  double beta() const { return beta_; }
  Complex psi_l() const { return psi_l_; }
  Complex psi_r() const { return psi_r_; }

 private:
  int n_;
  double beta_;
  Complex psi_l_, psi_r_;
};

// Rail-amplitude inner product <a|b> = conj(a_l) b_l + conj(a_r) b_r.
// Probes must share n and beta (else the Hilbert spaces differ and the
// two-dimensional reduction does not apply).
Complex probe_inner_product(const ProbeSpec& a, const ProbeSpec& b);

// A discrete ensemble {p_i, probe_i} over probes sharing n and beta.
// Validated: weights positive, summing to 1 within 1e-12 (stored
// renormalized), at least one element.
class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<ProbeSpec> probes);

  std::size_t size() const { return probes_.size(); }
  double weight(std::size_t i) const { return weights_[i]; }
  const ProbeSpec& probe(std::size_t i) const { return probes_[i]; }
  int n() const { return probes_.front().n(); }
  double beta() const { return probes_.front().beta(); }

 private:
  std::vector<double> weights_;
  std::vector<ProbeSpec> probes_;
};

// The two-state ensemble used throughout the worked examples: equal weights,
// rail amplitudes (sqrt3/2, 1/2) and (1/2, sqrt3/2).
Ensemble make_standard_ensemble(int n, double beta);

// Distances in the ranging game, all in the same units as 1/beta.
// y_true: the prover's actual offset; y_est: the offset the verifier tests
// against; y_fake: the offset a cheater wants to appear at; d: the verifier
// baseline separation (bookkeeping only -- the reduced model works in the
// offset coordinate).
struct Geometry {
  double y_true = 0.0;
  double y_est = 0.0;
  double y_fake = 0.0;
  double d = 0.0;
};

// Exact binomial coefficient C(n, k) as a double.  Exact integer arithmetic
// for n <= 64 (fits in uint64), lgamma beyond.
double binomial(int n, int k);

}  // namespace qrs
