#pragma once
// Fisher-information calculators for the ranging probes: finite-difference
// QFI from the fidelity, the closed forms for the balanced and single-sided
// configurations, the full general-transform QFI expression, and the
// classical FI of the position-sum measurement.

#include <optional>

#include "qrs/core.hpp"

namespace qrs {

enum class QfiMethod { closed_form, finite_difference, monte_carlo };

struct QfiResult {
  double value = 0.0;               // Fisher information, units 1/length^2
  QfiMethod method = QfiMethod::closed_form;
  std::optional<double> stderr_estimate;  // set for monte_carlo results
  // Set when the requested step violates dy*beta*n^2 <= 0.1, i.e. truncation
  // error may dominate the quoted value.
  bool step_warning = false;
};

// QFI via F = (8/dy^2) (1 - |<phi_y|phi_{y+dy}>|), Richardson-extrapolated
// from steps dy and dy/2 to cancel the O(dy^2) bias.  Default step
// 1e-3/(beta*n) balances truncation against cancellation in 1 - |overlap|.
QfiResult qfi_finite_difference(const Unitary2& u, const ProbeSpec& probe,
                                double y, std::optional<double> dy = {});

// Single-step (non-extrapolated) estimate at step dy; exposed so the O(dy^2)
// convergence rate itself can be tested.
double qfi_fd_single_step(const Unitary2& u, const ProbeSpec& probe, double y,
                          double dy);

// Balanced-combiner closed form 2 N (N+1) beta^2 (exact for N >= 3; see the
// module tests for the extra small-N terms the general expression retains).
QfiResult qfi_closed_form_balanced(const ProbeSpec& probe);

// Single-sided closed form 8 beta^2 N^2; requires psi_l = 1 (up to phase).
QfiResult qfi_closed_form_single_sided(const ProbeSpec& probe);

// The full QFI expression for an arbitrary rail transform u at offset y,
// evaluated verbatim via q_sum reductions.
QfiResult qfi_general_expression(const Unitary2& u, const ProbeSpec& probe,
                                 double y);

// Classical FI of the reduced (port, position-sum) measurement: 2 beta^2 N^2
// per copy; multiply by the number of copies at the call site.
QfiResult fi_closed_form_measurement(const ProbeSpec& probe);

}  // namespace qrs
