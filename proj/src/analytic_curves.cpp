#include "nonsig/analytic_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

namespace {

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;
constexpr double kDomainSlack = 1e-12;

double checked(CurveId id, double s) {
    const auto [lo, hi] = curve_domain(id);
    if (!(s >= lo - kDomainSlack && s <= hi + kDomainSlack)) {
        std::ostringstream os;
        os << to_string(id) << ": S = " << s << " outside [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
    }
    return std::clamp(s, lo, hi);
}

Behavior witness_of(NamedTag from, NamedTag to, double lambda) {
    return mix(named(from).behavior, named(to).behavior, std::clamp(lambda, 0.0, 1.0));
}

}  // namespace

std::string to_string(CurveId id) {
    switch (id) {
        case CurveId::LocalMax: return "local_max";
        case CurveId::CNonlocalMax: return "c_nonlocal_max";
        case CurveId::LdPrMax: return "ld_pr_max";
        case CurveId::NsMax: return "ns_max";
        case CurveId::QcMax: return "qc_max";
        case CurveId::BellPrMin: return "bell_pr_min";
        case CurveId::LocalMin: return "local_min";
    }
    return "?";
}

std::optional<CurveId> parse_curve_id(const std::string& name) {
    for (auto id : {CurveId::LocalMax, CurveId::CNonlocalMax, CurveId::LdPrMax, CurveId::NsMax, CurveId::QcMax,
                    CurveId::BellPrMin, CurveId::LocalMin}) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

std::pair<double, double> curve_domain(CurveId id) noexcept {
    switch (id) {
        case CurveId::LocalMax:
        case CurveId::LocalMin: return {0.0, 2.0};
        case CurveId::CNonlocalMax:
        case CurveId::LdPrMax: return {2.0, 4.0};
        case CurveId::NsMax: return {0.0, 4.0};
        case CurveId::QcMax: return {2.0, kTsirelson};
        case CurveId::BellPrMin: return {kTsirelson, 4.0};
    }
    return {0.0, 0.0};
}

double w(double s) {
    s = checked(CurveId::QcMax, s);
    const double angle = s >= kTsirelson ? std::numbers::pi / 2.0 : std::atan(s / std::sqrt(8.0 - s * s));
    return std::numbers::sqrt2 * std::cos(std::numbers::pi / 6.0 + angle / 3.0);
}

Behavior curve_witness(CurveId id, double s) {
    s = checked(id, s);
    switch (id) {
        case CurveId::LocalMax: {
            // (s SC~ + (2 - s) p0) / 2
            return witness_of(NamedTag::P0, NamedTag::SCTilde, s / 2.0);
        }
        case CurveId::CNonlocalMax: return witness_of(NamedTag::SC, NamedTag::PR, (s - 2.0) / 2.0);
        case CurveId::LdPrMax: return witness_of(NamedTag::LDAllOnes, NamedTag::PR, (s - 2.0) / 2.0);
        case CurveId::NsMax:
            if (s <= 2.0) return curve_witness(CurveId::LocalMax, s);
            return ld_pr_max(s) > c_nonlocal_max(s) ? curve_witness(CurveId::LdPrMax, s)
                                                    : curve_witness(CurveId::CNonlocalMax, s);
        case CurveId::QcMax: {
            const double wv = w(s);
            Correlators c;
            c.ab = {{{wv, wv}, {wv, std::clamp(3.0 * wv - s, -1.0, 1.0)}}};
            return correlators_to_behavior(c);
        }
        case CurveId::BellPrMin:
            return witness_of(NamedTag::Bell, NamedTag::PR, (s - kTsirelson) / (4.0 - kTsirelson));
        case CurveId::LocalMin: {
            // Alice deterministic, Bob biased: a product behavior with S = s.
            Correlators c;
            c.a = {1.0, 1.0};
            c.b = {s / 2.0, 0.0};
            c.ab = {{{s / 2.0, 0.0}, {s / 2.0, 0.0}}};
            return correlators_to_behavior(c);
        }
    }
    throw std::logic_error("unknown curve");
}

double local_max(double s) { return mutual_information(curve_witness(CurveId::LocalMax, s)); }
double c_nonlocal_max(double s) { return mutual_information(curve_witness(CurveId::CNonlocalMax, s)); }
double ld_pr_max(double s) { return mutual_information(curve_witness(CurveId::LdPrMax, s)); }

double ns_max(double s) {
    s = checked(CurveId::NsMax, s);
    if (s <= 2.0) return local_max(s);
    return std::max(ld_pr_max(s), c_nonlocal_max(s));
}

double qc_max(double s) { return mutual_information(curve_witness(CurveId::QcMax, s)); }
double bell_pr_min(double s) { return mutual_information(curve_witness(CurveId::BellPrMin, s)); }

double local_min(double s) {
    checked(CurveId::LocalMin, s);
    return 0.0;
}

double evaluate(CurveId id, double s) {
    switch (id) {
        case CurveId::LocalMax: return local_max(s);
        case CurveId::CNonlocalMax: return c_nonlocal_max(s);
        case CurveId::LdPrMax: return ld_pr_max(s);
        case CurveId::NsMax: return ns_max(s);
        case CurveId::QcMax: return qc_max(s);
        case CurveId::BellPrMin: return bell_pr_min(s);
        case CurveId::LocalMin: return local_min(s);
    }
    throw std::logic_error("unknown curve");
}

double ns_max_crossing() {
    static const double crossing = [] {
        auto diff = [](double s) { return ld_pr_max(s) - c_nonlocal_max(s); };
        // Both curves meet again at the PR point, so bracket the interior
        // sign change on a grid before bisecting.
        constexpr int kGrid = 2000;
        double lo = 2.0;
        double hi = 4.0;
        for (int k = 1; k < kGrid; ++k) {
            const double a = 2.0 + 2.0 * (k - 1) / kGrid;
            const double b = 2.0 + 2.0 * k / kGrid;
            if (diff(a) < 0.0 && diff(b) >= 0.0) {
                lo = a;
                hi = b;
                break;
            }
        }
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            (diff(mid) < 0.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return crossing;
}

std::vector<std::pair<double, double>> sample_curve(CurveId id, int n) {
    if (n < 2) throw DomainError("curve grid needs at least 2 points");
    const auto [lo, hi] = curve_domain(id);
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double s = k == n - 1 ? hi : lo + (hi - lo) * k / (n - 1);
        out.emplace_back(s, evaluate(id, s));
    }
    return out;
}

}  // namespace nonsig
