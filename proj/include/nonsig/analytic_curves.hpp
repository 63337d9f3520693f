#pragma once

// Closed-form boundary curves of the S-I representation. Each curve is
// realized by an explicit mixture behavior; the evaluators build that
// behavior and hand it to the functionals.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nonsig/behavior.hpp"

namespace nonsig {

enum class CurveId { LocalMax, CNonlocalMax, LdPrMax, NsMax, QcMax, BellPrMin, LocalMin };

std::string to_string(CurveId id);
/// Accepts the snake_case names used on the command line (e.g. "ns_max").
std::optional<CurveId> parse_curve_id(const std::string& name);

/// Closed domain [lo, hi] of S for a curve.
std::pair<double, double> curve_domain(CurveId id) noexcept;

/// Mixture behavior realizing the curve at s (domain checked).
Behavior curve_witness(CurveId id, double s);

double local_max(double s);
double c_nonlocal_max(double s);
double ld_pr_max(double s);
double ns_max(double s);
double qc_max(double s);
double bell_pr_min(double s);
double local_min(double s);

/// sqrt(2) cos(pi/6 + atan(s / sqrt(8 - s^2)) / 3) on [2, 2 sqrt 2], with the
/// limit value used at the right endpoint.
double w(double s);

double evaluate(CurveId id, double s);

/// S at which ld_pr_max overtakes c_nonlocal_max in (2, 4); bisection to
/// 1e-10, computed once.
double ns_max_crossing();

/// `n` equispaced samples over the curve's domain.
std::vector<std::pair<double, double>> sample_curve(CurveId id, int n);

}  // namespace nonsig
