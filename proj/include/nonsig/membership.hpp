#pragma once

// Membership oracles for the local set, the arcsin relaxation of the
// quantum set and the first NPA level. Every test returns a signed slack
// (positive = satisfied with margin).

#include <map>
#include <optional>
#include <span>
#include <string>

#include "nonsig/behavior.hpp"

namespace nonsig {

inline constexpr double kLocalTol = 1e-9;
inline constexpr double kArcsinTol = 1e-9;
inline constexpr double kDegenerateMarginal = 1e-9;

struct TestResult {
    bool passed = false;
    double slack = 0.0;
};

/// Local iff S <= 2 + tol; slack = 2 - S.
TestResult is_local(const Behavior& p);

/// Largest of the four |sum_x'y' asin(v_x'y') - 2 asin(v_xy)|. Arguments
/// within 1e-9 outside [-1,1] are clamped; throws DomainError otherwise.
double arcsin_chsh_max(const std::array<std::array<double, 2>, 2>& v);

/// Four arcsin inequalities on <A_x B_y>; slack = pi - max expression.
TestResult qtilde_test(const Behavior& p);

/// First NPA level: degenerate branch when some |<A_x>| or |<B_y>| reaches
/// 1 - 1e-9, otherwise the arcsin inequalities on the normalized
/// covariances F_xy. The degenerate branch reports slack +inf.
TestResult npa1_test(const Behavior& p);

/// F_xy = (<A_xB_y> - <A_x><B_y>) / sqrt((1-<A_x>^2)(1-<B_y>^2)), clamped
/// to [-1,1]. Undefined in the degenerate branch.
std::array<std::array<double, 2>, 2> npa1_covariances(const Correlators& c);

struct MembershipReport {
    bool ns_valid = false;
    // Present only when ns_valid.
    std::optional<bool> local;
    std::optional<bool> npa1;
    std::optional<bool> qtilde;
    std::map<std::string, double> slacks;
    /// Set when a test contradicts the inclusion chain local => npa1 => qtilde.
    bool inconsistent = false;
    std::vector<Violation> violations;
};

MembershipReport report(const Behavior& p);
MembershipReport report(std::span<const double, 16> raw, double tol = kExternalTol);

}  // namespace nonsig
