#pragma once
// Brute-force reference implementations used to certify the analytic overlap
// machinery before it is trusted.  Everything in this module is deliberately
// slow and literal:
//
//  * oracle_overlap builds both N-photon output states as explicit
//    configuration-space amplitudes over (exit port, position)^N on a
//    discretized line and integrates their product -- cost (2*points)^N,
//    hence the N <= 3 cap.
//  * oracle_index_sum evaluates a weighted sum over all 2^N mode-index
//    vectors directly, with per-photon factors.
//  * oracle_measurement_density tabulates the single-photon detection
//    density over (port, position) by squaring explicit wavefunctions.
//
// This module depends only on the core types.  It must not call into the
// analytic kernel code it exists to check.

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "qrs/core.hpp"

namespace qrs {

// Uniform discretization of the line used by the brute-force integrals.
// points must be a power of two >= 1024; range symmetric checks are done at
// the point of use (coverage depends on beta and pulse centers).
struct GridSpec {
  double x_min;
  double x_max;
  int points;

  GridSpec(double lo, double hi, int n);

  double step() const { return (x_max - x_min) / points; }
  // beta-adapted default: [-10/beta, 10/beta] with 4096 points; Gaussian
  // tails at 10 widths are below 1e-20.
  static GridSpec default_for(double beta);
};

// Overlap <phi(y_est) | gamma(y_fake)> between the honest output state
// (transfer matrix u, offset y_est) and the cheater output state (transfer
// matrix u_prime, possibly sub-unitary, offset y_fake), computed by explicit
// configuration-space integration.  N <= 3.
Complex oracle_overlap(const Unitary2& u, const Mat2& u_prime,
                       const ProbeSpec& probe, double y_est, double y_fake,
                       const GridSpec& grid);

// Literal sum over all 2^n index vectors i of
//   prod_m (a_m if i_m = 0 else b_m) * kernel(number of ones in i).
// u_factors supplies the per-photon (a_m, b_m) pairs; n = u_factors.size()
// must be <= 12 (cost 2^n * n).
Complex oracle_index_sum(const std::vector<std::pair<Complex, Complex>>& u_factors,
                         const std::function<double(int)>& kernel);

// Tabulated single-photon (N = 1) detection density over (port, position).
// Row q of `density` holds P(port = q, position = z) on the grid nodes.
struct MeasurementDensity {
  GridSpec grid;
  std::vector<double> density[2];

  // Total mass, per-port mass, and conditional mean/variance of the position
  // given the port, all by direct quadrature on the tabulated values.
  double total_mass() const;
  double port_mass(int q) const;
  double port_mean(int q) const;
  double port_variance(int q) const;
};

MeasurementDensity oracle_measurement_density(const ProbeSpec& probe, double y,
                                              const GridSpec& grid);

}  // namespace qrs
