#include "nonsig/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

struct BehaviorAccess {
    static Behavior make(const ProbabilityTable& p) noexcept { return Behavior(p); }
};

std::array<double, 8> Correlators::flat() const noexcept {
    return {a[0], a[1], b[0], b[1], ab[0][0], ab[0][1], ab[1][0], ab[1][1]};
}

Correlators Correlators::from_flat(std::span<const double, 8> v) noexcept {
    Correlators c;
    c.a = {v[0], v[1]};
    c.b = {v[2], v[3]};
    c.ab = {{{v[4], v[5]}, {v[6], v[7]}}};
    return c;
}

double max_abs_diff(const Correlators& lhs, const Correlators& rhs) noexcept {
    const auto l = lhs.flat();
    const auto r = rhs.flat();
    double worst = 0.0;
    for (std::size_t i = 0; i < l.size(); ++i) worst = std::max(worst, std::abs(l[i] - r[i]));
    return worst;
}

bool is_symmetric(const Correlators& c, double tol) noexcept {
    return std::abs(c.a[0] - c.b[0]) <= tol && std::abs(c.a[1] - c.b[1]) <= tol &&
           std::abs(c.ab[0][1] - c.ab[1][0]) <= tol;
}

bool has_zero_marginals(const Correlators& c, double tol) noexcept {
    return std::abs(c.a[0]) <= tol && std::abs(c.a[1]) <= tol && std::abs(c.b[0]) <= tol &&
           std::abs(c.b[1]) <= tol;
}

double Behavior::marginal_a(int a, int x) const noexcept {
    return p_[table_index(x, 0, a, 0)] + p_[table_index(x, 0, a, 1)];
}

double Behavior::marginal_b(int b, int y) const noexcept {
    return p_[table_index(0, y, 0, b)] + p_[table_index(0, y, 1, b)];
}

Correlators Behavior::correlators() const noexcept { return behavior_to_correlators(*this); }

ProbabilityTable correlators_to_table(const Correlators& c) noexcept {
    ProbabilityTable p{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib) {
                    const double a = outcome_value(ia);
                    const double b = outcome_value(ib);
                    p[table_index(x, y, ia, ib)] =
                        0.25 * (1.0 + a * c.a[x] + b * c.b[y] + a * b * c.ab[x][y]);
                }
    return p;
}

Behavior correlators_to_behavior(const Correlators& c, double tol) {
    for (double v : c.flat()) {
        if (!(std::abs(v) <= 1.0 + kInternalTol)) {
            std::ostringstream os;
            os << "correlator component " << v << " outside [-1, 1]";
            throw DomainError(os.str());
        }
    }
    const auto p = correlators_to_table(c);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < -tol) {
            std::ostringstream os;
            os << "positivity violated: table entry " << i << " = " << p[i];
            throw ValidationError(os.str());
        }
    }
    return BehaviorAccess::make(p);
}

Correlators behavior_to_correlators(const Behavior& p) noexcept {
    Correlators c;
    for (int x = 0; x < 2; ++x) c.a[x] = p.marginal_a(0, x) - p.marginal_a(1, x);
    for (int y = 0; y < 2; ++y) c.b[y] = p.marginal_b(0, y) - p.marginal_b(1, y);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double s = 0.0;
            for (int ia = 0; ia < 2; ++ia)
                for (int ib = 0; ib < 2; ++ib)
                    s += outcome_value(ia) * outcome_value(ib) * p.prob(ia, ib, x, y);
            c.ab[x][y] = s;
        }
    return c;
}

namespace {

std::string xy_label(const char* name, int x, int y) {
    std::ostringstream os;
    os << name << "(x=" << x << ",y=" << y << ")";
    return os.str();
}

}  // namespace

ValidationResult validate(std::span<const double, 16> raw, double tol) {
    ValidationResult out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!std::isfinite(raw[i])) out.violations.push_back({"finite(entry " + std::to_string(i) + ")", raw[i]});
    }
    if (!out.violations.empty()) return out;

    auto at = [&](int x, int y, int a, int b) { return raw[table_index(x, y, a, b)]; };

    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double total = at(x, y, 0, 0) + at(x, y, 0, 1) + at(x, y, 1, 0) + at(x, y, 1, 1);
            if (std::abs(total - 1.0) > tol) out.violations.push_back({xy_label("normalization", x, y), total - 1.0});
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const double v = at(x, y, a, b);
                    if (v < -tol) {
                        std::ostringstream os;
                        os << "positivity(a=" << a << ",b=" << b << ",x=" << x << ",y=" << y << ")";
                        out.violations.push_back({os.str(), v});
                    }
                }
        }

    // Alice's marginal may not depend on y, Bob's may not depend on x.
    for (int x = 0; x < 2; ++x)
        for (int a = 0; a < 2; ++a) {
            const double d = (at(x, 0, a, 0) + at(x, 0, a, 1)) - (at(x, 1, a, 0) + at(x, 1, a, 1));
            if (std::abs(d) > tol) {
                std::ostringstream os;
                os << "non-signaling(Alice,a=" << a << ",x=" << x << ")";
                out.violations.push_back({os.str(), d});
            }
        }
    for (int y = 0; y < 2; ++y)
        for (int b = 0; b < 2; ++b) {
            const double d = (at(0, y, 0, b) + at(0, y, 1, b)) - (at(1, y, 0, b) + at(1, y, 1, b));
            if (std::abs(d) > tol) {
                std::ostringstream os;
                os << "non-signaling(Bob,b=" << b << ",y=" << y << ")";
                out.violations.push_back({os.str(), d});
            }
        }

    if (out.violations.empty()) {
        ProbabilityTable p{};
        std::copy(raw.begin(), raw.end(), p.begin());
        out.behavior = BehaviorAccess::make(p);
    }
    return out;
}

Behavior make_behavior(std::span<const double, 16> raw, double tol) {
    auto result = validate(raw, tol);
    if (result) return *result.behavior;
    std::ostringstream os;
    os << "invalid behavior:";
    for (const auto& v : result.violations) os << ' ' << v.constraint << " residual=" << v.residual << ';';
    throw ValidationError(os.str());
}

Correlators named_correlators(NamedTag tag) noexcept {
    const double r = 1.0 / std::sqrt(2.0);
    Correlators c;
    switch (tag) {
        case NamedTag::PR: c.ab = {{{1.0, 1.0}, {1.0, -1.0}}}; break;
        case NamedTag::SC: c.ab = {{{1.0, 1.0}, {1.0, 1.0}}}; break;
        case NamedTag::SCTilde: c.ab = {{{-1.0, 1.0}, {1.0, -1.0}}}; break;
        case NamedTag::LDAllOnes:
            c.a = {1.0, 1.0};
            c.b = {1.0, 1.0};
            c.ab = {{{1.0, 1.0}, {1.0, 1.0}}};
            break;
        case NamedTag::Bell: c.ab = {{{r, r}, {r, -r}}}; break;
        case NamedTag::Noise: break;
        case NamedTag::P0:
            c.a = {-0.5, 0.5};
            c.b = {-0.5, 0.5};
            break;
    }
    return c;
}

NamedBehavior named(NamedTag tag) { return {tag, correlators_to_behavior(named_correlators(tag))}; }

std::string to_string(NamedTag tag) {
    switch (tag) {
        case NamedTag::PR: return "PR";
        case NamedTag::SC: return "SC";
        case NamedTag::SCTilde: return "SC_tilde";
        case NamedTag::LDAllOnes: return "LD_allones";
        case NamedTag::Bell: return "Bell";
        case NamedTag::Noise: return "Noise";
        case NamedTag::P0: return "P0";
    }
    return "?";
}

std::optional<NamedTag> parse_named_tag(const std::string& name) {
    for (auto tag : {NamedTag::PR, NamedTag::SC, NamedTag::SCTilde, NamedTag::LDAllOnes, NamedTag::Bell,
                     NamedTag::Noise, NamedTag::P0}) {
        if (to_string(tag) == name) return tag;
    }
    return std::nullopt;
}

Behavior mix(const Behavior& p, const Behavior& q, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("mixing weight outside [0, 1]");
    ProbabilityTable out{};
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - lambda) * p.table()[i] + lambda * q.table()[i];
    return BehaviorAccess::make(out);
}

Behavior Relabeling::apply(const Behavior& p) const {
    ProbabilityTable out{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    const int sx = x ^ static_cast<int>(swap_x);
                    const int sy = y ^ static_cast<int>(swap_y);
                    const int sa = a ^ static_cast<int>(flip_a[x]);
                    const int sb = b ^ static_cast<int>(flip_b[y]);
                    out[table_index(x, y, a, b)] = p.prob(sa, sb, sx, sy);
                }
    return BehaviorAccess::make(out);
}

Correlators Relabeling::apply(const Correlators& c) const noexcept {
    Correlators out;
    for (int x = 0; x < 2; ++x) {
        const int sx = x ^ static_cast<int>(swap_x);
        out.a[x] = (flip_a[x] ? -1.0 : 1.0) * c.a[sx];
    }
    for (int y = 0; y < 2; ++y) {
        const int sy = y ^ static_cast<int>(swap_y);
        out.b[y] = (flip_b[y] ? -1.0 : 1.0) * c.b[sy];
    }
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            const double sign = (flip_a[x] != flip_b[y]) ? -1.0 : 1.0;
            out.ab[x][y] = sign * c.ab[x ^ static_cast<int>(swap_x)][y ^ static_cast<int>(swap_y)];
        }
    return out;
}

Relabeling chsh_relabeling(int slot) {
    if (slot < 0 || slot >= kChshSlots) throw DomainError("CHSH slot outside 0..7");
    const auto base = chsh_sign_pattern(0);
    const auto target = chsh_sign_pattern(slot);
    // Output flips of Alice (per input) and of Bob for y = 0 generate all
    // even sign patterns on <A_x B_y>, which act simply transitively on the
    // eight odd patterns of the signed CHSH expressions.
    for (int bits = 0; bits < 8; ++bits) {
        Relabeling r;
        r.flip_a = {(bits & 1) != 0, (bits & 2) != 0};
        r.flip_b = {(bits & 4) != 0, false};
        bool ok = true;
        for (int x = 0; x < 2 && ok; ++x)
            for (int y = 0; y < 2 && ok; ++y) {
                const int sign = (r.flip_a[x] != r.flip_b[y]) ? -1 : 1;
                ok = base[x][y] * sign == target[x][y];
            }
        if (ok) return r;
    }
    throw std::logic_error("no relabeling realizes CHSH slot");
}

std::array<Behavior, 8> relabelings(const Behavior& p) {
    return {chsh_relabeling(0).apply(p), chsh_relabeling(1).apply(p), chsh_relabeling(2).apply(p),
            chsh_relabeling(3).apply(p), chsh_relabeling(4).apply(p), chsh_relabeling(5).apply(p),
            chsh_relabeling(6).apply(p), chsh_relabeling(7).apply(p)};
}

}  // namespace nonsig
