#include "qrs/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace qrs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// z^n by repeated multiplication (n is tiny; avoids polar branch cuts).
Complex ipow(Complex z, int n) {
  Complex r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// Require the grid to reach at least 8/beta beyond every pulse center.
void check_coverage(const GridSpec& g, double beta, double center_span) {
  const double need = center_span + 8.0 / beta;
  if (g.x_max < need || g.x_min > -need)
    throw std::invalid_argument(
        "GridSpec: grid must cover 8/beta beyond all pulse centers");
}

// The frequency lattice conjugate to a periodic position grid of length L:
// k_j = 2*pi*j/L.  Plane waves e^{i k_j x} at these frequencies are exactly
// orthonormal under the uniform grid sum, which is what makes the literal
// configuration-space integral below a well-defined (regularized) Fock-space
// computation: the continuum sigma -> 0 probe is non-normalizable, and the
// discrete frequency lattice is the regulator.  Spacing 2*pi/L ~ 0.31*beta at
// the default L = 20/beta resolves the spectral envelope (width beta/sqrt2)
// to ~1e-16 by Poisson summation.
struct FrequencyNode {
  double k;
  double c;  // real Gaussian envelope weight, l2-normalized over nodes
};

std::vector<FrequencyNode> envelope_nodes(const GridSpec& g, double beta) {
  const double L = g.x_max - g.x_min;
  const double dk = 2.0 * kPi / L;
  std::vector<FrequencyNode> nodes;
  double norm2 = 0.0;
  for (int j = -g.points / 2; j < g.points / 2; ++j) {
    const double k = dk * j;
    const double c = std::exp(-k * k / (2.0 * beta * beta));
    if (c < 1e-18) continue;  // below double precision once squared
    nodes.push_back({k, c});
    norm2 += c * c;
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (auto& n : nodes) n.c *= s;
  return nodes;
}

// Per-exit-port, per-photon transfer coefficients at one frequency node for
// one input branch.  A photon from branch l exits port 0 at its own frequency
// with coefficient T_00, or port 1 at the mirrored frequency with T_10 and
// the round-trip phase e^{-2iky}; branch r is the mirror image.  The mirrored
// frequency is what couples +k to -k and produces the position-shift
// structure of the cross-branch overlaps.
struct BranchCoeffs {
  Complex port[2];  // port[s]: coefficient for exit port s
  int sign[2];      // sign[s]: +1 -> e^{+ikx}, -1 -> e^{-ikx}
};

BranchCoeffs branch_l(const Mat2& t, double k, double y) {
  const Complex ph = std::polar(1.0, -2.0 * k * y);
  return {{t.at(0, 0), t.at(1, 0) * ph}, {+1, -1}};
}

BranchCoeffs branch_r(const Mat2& t, double k, double y) {
  const Complex ph = std::polar(1.0, -2.0 * k * y);
  return {{t.at(0, 1) * ph, t.at(1, 1)}, {-1, +1}};
}

// Amplitude table for one output state: amp[n1][t] is the N-photon
// configuration amplitude (without the grid normalization P^{-N/2}) for any
// port pattern with n1 photons on port 1, evaluated at Sum_m sigma_m x_{i_m}
// congruent to x_min*(N-2*n1) + step*t.  The amplitude depends on the
// configuration only through (n1, t): within one branch every port-0 photon
// shares one coefficient and frequency sign, every port-1 photon the other.
std::vector<std::vector<Complex>> amplitude_table(const Mat2& t, double y,
                                                  const ProbeSpec& probe,
                                                  const GridSpec& g,
                                                  const std::vector<FrequencyNode>& nodes) {
  const int n = probe.n();
  const int p = g.points;
  const double x0 = g.x_min;
  std::vector<std::vector<Complex>> amp(n + 1, std::vector<Complex>(p, 0.0));
  for (const auto& node : nodes) {
    const BranchCoeffs bl = branch_l(t, node.k, y);
    const BranchCoeffs br = branch_r(t, node.k, y);
    for (int n1 = 0; n1 <= n; ++n1) {
      const int sig_sum = (n - n1) - n1;  // Sum_m sigma_m for branch l
      // Branch l: product of per-photon coefficients and the common-k phase
      // e^{+ik xi}; branch r rides the opposite frequency, e^{-ik xi}.
      const Complex wl = probe.psi_l() * node.c * ipow(bl.port[0], n - n1) *
                         ipow(bl.port[1], n1) *
                         std::polar(1.0, node.k * x0 * sig_sum);
      const Complex wr = probe.psi_r() * node.c * ipow(br.port[0], n - n1) *
                         ipow(br.port[1], n1) *
                         std::polar(1.0, -node.k * x0 * sig_sum);
      if (std::abs(wl) < 1e-300 && std::abs(wr) < 1e-300) continue;
      std::vector<Complex>& row = amp[n1];
      // e^{i k step * t} is periodic in t with period p because k is a
      // lattice frequency; accumulate one full period.
      const double dphi = node.k * g.step();
      for (int tt = 0; tt < p; ++tt) {
        const Complex e = std::polar(1.0, dphi * tt);
        row[tt] += wl * e + wr * std::conj(e);
      }
    }
  }
  return amp;
}

}  // namespace

GridSpec::GridSpec(double lo, double hi, int n) : x_min(lo), x_max(hi), points(n) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("GridSpec: need finite x_min < x_max");
  if (!power_of_two(n) || n < 1024)
    throw std::invalid_argument("GridSpec: points must be a power of two >= 1024");
}

GridSpec GridSpec::default_for(double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("GridSpec: beta must be positive");
  return GridSpec(-10.0 / beta, 10.0 / beta, 4096);
}

Complex oracle_overlap(const Unitary2& u, const Mat2& u_prime,
                       const ProbeSpec& probe, double y_est, double y_fake,
                       const GridSpec& grid) {
  const int n = probe.n();
  if (n > 3)
    throw std::invalid_argument("oracle_overlap: N <= 3 only (cost (2*points)^N)");
  for (int c = 0; c < 2; ++c)
    if (u_prime.col_norm(c) > 1.0 + 1e-9)
      throw std::invalid_argument("oracle_overlap: u_prime column norm exceeds 1");
  check_coverage(grid, probe.beta(),
                 2.0 * std::max(std::abs(y_est), std::abs(y_fake)));

  const auto nodes = envelope_nodes(grid, probe.beta());
  const auto bra = amplitude_table(u.mat(), y_est, probe, grid, nodes);
  const auto ket = amplitude_table(u_prime, y_fake, probe, grid, nodes);

  const int p = grid.points;
  // Literal sum over every port pattern s in {0,1}^N and every position
  // configuration i in [0,p)^N.  The amplitude lookups are exact: the tables
  // above are the configuration amplitudes evaluated at the reduced
  // coordinate t = Sum_m sigma_m i_m mod p.
  long double acc_re = 0.0L, acc_im = 0.0L;
  for (int pattern = 0; pattern < (1 << n); ++pattern) {
    int n1 = 0;
    int sigma[3] = {0, 0, 0};
    for (int m = 0; m < n; ++m) {
      const int bit = (pattern >> m) & 1;
      sigma[m] = bit ? -1 : +1;
      n1 += bit;
    }
    const Complex* b = bra[n1].data();
    const Complex* k = ket[n1].data();
    Complex block = 0.0;
    if (n == 1) {
      for (int i0 = 0; i0 < p; ++i0) {
        const int t = sigma[0] > 0 ? i0 : (p - i0) % p;
        block += std::conj(b[t]) * k[t];
      }
    } else if (n == 2) {
      for (int i0 = 0; i0 < p; ++i0) {
        const int t0 = ((sigma[0] * i0) % p + p) % p;
        int t = t0;
        const int s1 = (sigma[1] + p) % p;
        for (int i1 = 0; i1 < p; ++i1) {
          block += std::conj(b[t]) * k[t];
          t += s1;
          if (t >= p) t -= p;
        }
      }
    } else {
      const int s2 = (sigma[2] + p) % p;
      for (int i0 = 0; i0 < p; ++i0) {
        const int t0 = ((sigma[0] * i0) % p + p) % p;
        for (int i1 = 0; i1 < p; ++i1) {
          const int t1 = (t0 + ((sigma[1] * i1) % p + p)) % p;
          int t = t1;
          double re = 0.0, im = 0.0;
          for (int i2 = 0; i2 < p; ++i2) {
            const Complex v = std::conj(b[t]) * k[t];
            re += v.real();
            im += v.imag();
            t += s2;
            if (t >= p) t -= p;
          }
          block += Complex(re, im);
        }
      }
    }
    acc_re += block.real();
    acc_im += block.imag();
  }
  // Grid normalization: each photon's plane-wave factor carries 1/sqrt(p).
  const double scale = std::pow(static_cast<double>(p), -n);
  return Complex(static_cast<double>(acc_re) * scale,
                 static_cast<double>(acc_im) * scale);
}

Complex oracle_index_sum(const std::vector<std::pair<Complex, Complex>>& u_factors,
                         const std::function<double(int)>& kernel) {
  const int n = static_cast<int>(u_factors.size());
  if (n < 1 || n > 12)
    throw std::invalid_argument("oracle_index_sum: need 1 <= n <= 12");
  Complex acc = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Complex prod = 1.0;
    for (int m = 0; m < n; ++m)
      prod *= ((mask >> m) & 1u) ? u_factors[m].second : u_factors[m].first;
    acc += prod * kernel(static_cast<int>(std::popcount(mask)));
  }
  return acc;
}

MeasurementDensity oracle_measurement_density(const ProbeSpec& probe, double y,
                                              const GridSpec& grid) {
  if (probe.n() != 1)
    throw std::invalid_argument("oracle_measurement_density: N = 1 only");
  const double beta = probe.beta();
  check_coverage(grid, beta, 2.0 * std::abs(y));

  // Position-space pulse envelope (unit L2 norm), displaced by the 2y
  // round-trip for the reflected components.
  const double norm = std::pow(beta * beta / kPi, 0.25);
  auto pulse = [&](double z) { return norm * std::exp(-beta * beta * z * z / 2.0); };

  const Unitary2 u = make_balanced();
  const Unitary2 r = conjugate(u);  // detector-side combiner

  MeasurementDensity out{grid, {}};
  out.density[0].resize(grid.points);
  out.density[1].resize(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    const double z = grid.x_min + i * grid.step();
    // Return-pulse wavefunctions on the two rails after the prover's
    // combiner: the component that crossed to the other rail is displaced by
    // 2y and direction-flipped.
    auto f_l = [&](double x) {
      return probe.psi_l() * u.at(0, 0) * pulse(x) +
             probe.psi_r() * u.at(0, 1) * pulse(x - 2.0 * y);
    };
    auto f_r = [&](double x) {
      return probe.psi_l() * u.at(1, 0) * pulse(x - 2.0 * y) +
             probe.psi_r() * u.at(1, 1) * pulse(x);
    };
    const Complex a0 = r.at(0, 0) * f_l(z) + r.at(1, 0) * f_r(-z);
    const Complex a1 = r.at(0, 1) * f_l(-z) + r.at(1, 1) * f_r(z);
    out.density[0][i] = std::norm(a0);
    out.density[1][i] = std::norm(a1);
  }
  return out;
}

double MeasurementDensity::total_mass() const { return port_mass(0) + port_mass(1); }

double MeasurementDensity::port_mass(int q) const {
  const double dz = grid.step();
  double s = 0.0;
  for (std::size_t i = 0; i < density[q].size(); ++i) {
    const double w = (i == 0 || i + 1 == density[q].size()) ? 0.5 : 1.0;
    s += w * density[q][i];
  }
  return s * dz;
}

double MeasurementDensity::port_mean(int q) const {
  const double dz = grid.step();
  double s = 0.0;
  for (std::size_t i = 0; i < density[q].size(); ++i) {
    const double w = (i == 0 || i + 1 == density[q].size()) ? 0.5 : 1.0;
    s += w * density[q][i] * (grid.x_min + i * dz);
  }
  return s * dz / port_mass(q);
}

double MeasurementDensity::port_variance(int q) const {
  const double mu = port_mean(q);
  const double dz = grid.step();
  double s = 0.0;
  for (std::size_t i = 0; i < density[q].size(); ++i) {
    const double w = (i == 0 || i + 1 == density[q].size()) ? 0.5 : 1.0;
    const double z = grid.x_min + i * dz;
    s += w * density[q][i] * (z - mu) * (z - mu);
  }
  return s * dz / port_mass(q);
}

}  // namespace qrs
