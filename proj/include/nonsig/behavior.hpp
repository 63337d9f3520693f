#pragma once

// Behaviors of the (2,2,2) Bell scenario: two parties, two inputs each,
// two outcomes each. Outcome index 0 stands for the physical value +1 and
// index 1 for -1; the convention is used by every table in the library.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nonsig {

/// Tolerance for behaviors produced inside the library.
inline constexpr double kInternalTol = 1e-12;
/// Tolerance for behaviors read from user input.
inline constexpr double kExternalTol = 1e-9;

/// Physical value (+1 / -1) of an outcome index (0 / 1).
constexpr int outcome_value(int index) noexcept { return index == 0 ? 1 : -1; }

/// Flat index of p(ab|xy) in a 16-entry table, ordered (x, y, a, b).
constexpr std::size_t table_index(int x, int y, int a, int b) noexcept {
    return static_cast<std::size_t>(((x * 2 + y) * 2 + a) * 2 + b);
}

using ProbabilityTable = std::array<double, 16>;

/// The eight mean values <A_x>, <B_y>, <A_x B_y>.
struct Correlators {
    std::array<double, 2> a{};
    std::array<double, 2> b{};
    std::array<std::array<double, 2>, 2> ab{};  // ab[x][y]

    /// Order: a0, a1, b0, b1, c00, c01, c10, c11.
    std::array<double, 8> flat() const noexcept;
    static Correlators from_flat(std::span<const double, 8> v) noexcept;

    bool operator==(const Correlators&) const = default;
};

/// Maximum componentwise distance between two correlator tuples.
double max_abs_diff(const Correlators& lhs, const Correlators& rhs) noexcept;

/// Membership predicate of the 5-dimensional symmetric slice:
/// <A_x> = <B_x> and <A_0 B_1> = <A_1 B_0>.
bool is_symmetric(const Correlators& c, double tol = 1e-12) noexcept;

/// True when every single-party mean value vanishes (correlation space).
bool has_zero_marginals(const Correlators& c, double tol = 1e-12) noexcept;

/// A normalized, positive, non-signaling probability table. Instances only
/// come out of the checked factories below, so holding one is proof the
/// invariants held when it was built.
class Behavior {
public:
    /// p(ab|xy) by outcome index.
    double prob(int a, int b, int x, int y) const noexcept { return p_[table_index(x, y, a, b)]; }
    const ProbabilityTable& table() const noexcept { return p_; }

    /// p(a|x) and p(b|y) computed by summing the joint table.
    double marginal_a(int a, int x) const noexcept;
    double marginal_b(int b, int y) const noexcept;

    Correlators correlators() const noexcept;

    bool operator==(const Behavior&) const = default;

private:
    explicit Behavior(const ProbabilityTable& p) noexcept : p_(p) {}
    ProbabilityTable p_{};

    friend struct BehaviorAccess;
};

/// Probabilities p(ab|xy) = (1 + a<A_x> + b<B_y> + ab<A_xB_y>)/4. Normalization
/// and non-signaling hold identically; positivity is not checked.
ProbabilityTable correlators_to_table(const Correlators& c) noexcept;

/// Checked conversion. Throws DomainError when a component leaves [-1,1]
/// and ValidationError when an induced probability is below -tol.
Behavior correlators_to_behavior(const Correlators& c, double tol = kInternalTol);

/// Exact inverse of correlators_to_behavior.
Correlators behavior_to_correlators(const Behavior& p) noexcept;

struct Violation {
    std::string constraint;  // e.g. "normalization(x=0,y=1)"
    double residual = 0.0;
};

struct ValidationResult {
    std::optional<Behavior> behavior;
    std::vector<Violation> violations;

    explicit operator bool() const noexcept { return behavior.has_value(); }
};

/// Checks normalization, positivity and the non-signaling conditions on a raw
/// table (indexed by table_index). Violations are reported, never clamped.
ValidationResult validate(std::span<const double, 16> raw, double tol = kExternalTol);

/// Like validate, but throws ValidationError naming every violation.
Behavior make_behavior(std::span<const double, 16> raw, double tol = kExternalTol);

enum class NamedTag { PR, SC, SCTilde, LDAllOnes, Bell, Noise, P0 };

struct NamedBehavior {
    NamedTag tag;
    Behavior behavior;
};

Correlators named_correlators(NamedTag tag) noexcept;
NamedBehavior named(NamedTag tag);
std::string to_string(NamedTag tag);
std::optional<NamedTag> parse_named_tag(const std::string& name);

/// (1 - lambda) p + lambda q, so mix(p, q, 0) == p and mix(p, q, 1) == q.
Behavior mix(const Behavior& p, const Behavior& q, double lambda);

/// Relabeling of inputs and outputs. The image behavior is
///   p'(a b | x y) = p(a ^ flip_a[x], b ^ flip_b[y] | x ^ swap_x, y ^ swap_y).
struct Relabeling {
    bool swap_x = false;
    bool swap_y = false;
    std::array<bool, 2> flip_a{};
    std::array<bool, 2> flip_b{};

    Behavior apply(const Behavior& p) const;
    Correlators apply(const Correlators& c) const noexcept;
};

/// The eight output relabelings that carry the canonical CHSH expression
/// (slot 0) onto each of the eight signed expressions. Element k satisfies
/// chsh_linear(chsh_relabeling(k).apply(p), 0) == chsh_linear(p, k).
Relabeling chsh_relabeling(int slot);

/// Orbit of p under chsh_relabeling(0..7); element k realizes slot k.
std::array<Behavior, 8> relabelings(const Behavior& p);

}  // namespace nonsig
