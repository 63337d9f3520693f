#include "nonsig/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

namespace {

double clamped_asin(double v) {
    if (std::abs(v) > 1.0 + kArcsinTol) throw DomainError("arcsin argument outside [-1, 1]");
    return std::asin(std::clamp(v, -1.0, 1.0));
}

}  // namespace

TestResult is_local(const Behavior& p) {
    const double s = s_max(p);
    return {s <= 2.0 + kLocalTol, 2.0 - s};
}

double arcsin_chsh_max(const std::array<std::array<double, 2>, 2>& v) {
    std::array<std::array<double, 2>, 2> t{};
    double total = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            t[x][y] = clamped_asin(v[x][y]);
            total += t[x][y];
        }
    double worst = 0.0;
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) worst = std::max(worst, std::abs(total - 2.0 * t[x][y]));
    return worst;
}

TestResult qtilde_test(const Behavior& p) {
    const double slack = std::numbers::pi - arcsin_chsh_max(p.correlators().ab);
    return {slack >= -kArcsinTol, slack};
}

std::array<std::array<double, 2>, 2> npa1_covariances(const Correlators& c) {
    std::array<std::array<double, 2>, 2> f{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double denom = std::sqrt((1.0 - c.a[x] * c.a[x]) * (1.0 - c.b[y] * c.b[y]));
            f[x][y] = std::clamp((c.ab[x][y] - c.a[x] * c.b[y]) / denom, -1.0, 1.0);
        }
    return f;
}

TestResult npa1_test(const Behavior& p) {
    const auto c = p.correlators();
    for (int k = 0; k < 2; ++k) {
        if (std::abs(c.a[k]) >= 1.0 - kDegenerateMarginal || std::abs(c.b[k]) >= 1.0 - kDegenerateMarginal)
            return {true, std::numeric_limits<double>::infinity()};
    }
    const double slack = std::numbers::pi - arcsin_chsh_max(npa1_covariances(c));
    return {slack >= -kArcsinTol, slack};
}

MembershipReport report(const Behavior& p) {
    MembershipReport r;
    r.ns_valid = true;
    const auto loc = is_local(p);
    const auto npa = npa1_test(p);
    const auto qt = qtilde_test(p);
    r.local = loc.passed;
    r.npa1 = npa.passed;
    r.qtilde = qt.passed;
    r.slacks = {{"local", loc.slack}, {"npa1", npa.slack}, {"qtilde", qt.slack}};
    r.inconsistent = (loc.passed && !npa.passed) || (npa.passed && !qt.passed);
    return r;
}

MembershipReport report(std::span<const double, 16> raw, double tol) {
    auto checked = validate(raw, tol);
    if (!checked) {
        MembershipReport r;
        r.violations = std::move(checked.violations);
        return r;
    }
    return report(*checked.behavior);
}

}  // namespace nonsig
