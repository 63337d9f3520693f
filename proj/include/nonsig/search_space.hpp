#pragma once

// Feasible region of the fixed-S optimization problems, written in a
// reduced coordinate z:  correlators = offset + basis * z.
//
// The basis already encodes the chosen slice (NS: 8 free correlators,
// SYM: 5, correlation space: 4) and the equality "canonical CHSH = s", so
// normalization, non-signaling and the equality hold identically. What is
// left are inequalities:
//   * the 16 positivity conditions p(ab|xy) >= 0,
//   * the 7 other signed CHSH expressions <= s (so that S equals s),
//   * optionally the 8 signed arcsin inequalities of the quantum relaxation.

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nonsig/behavior.hpp"

namespace nonsig {

enum class SetKind { NS, SYM, C };
enum class Relaxation { None, QTilde };

std::string to_string(SetKind set);
std::optional<SetKind> parse_set_kind(const std::string& name);

/// Closed range of feasible S for a set (with an optional relaxation).
std::pair<double, double> feasible_s_range(SetKind set, Relaxation relaxation) noexcept;

using VecZ = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;
using MatZ = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;

Vec8 to_vec8(const Correlators& c) noexcept;
Correlators from_vec8(const Vec8& v) noexcept;

struct ObjectiveValue {
    double value = 0.0;
    VecZ gradient;
    MatZ hessian;
};

class SearchSpace {
public:
    /// Throws DomainError when s is outside feasible_s_range.
    SearchSpace(SetKind set, double s, Relaxation relaxation = Relaxation::None);

    SetKind set() const noexcept { return set_; }
    Relaxation relaxation() const noexcept { return relaxation_; }
    double s() const noexcept { return s_; }
    int dim() const noexcept { return static_cast<int>(basis_.cols()); }

    Correlators correlators(const VecZ& z) const;
    /// Least-squares coordinates of c; exact when c lies in the slice.
    VecZ coordinates(const Correlators& c) const;
    /// Whether c lies on the affine slice (within tol).
    bool contains_affinely(const Correlators& c, double tol = 1e-10) const;

    /// A strictly feasible reference point.
    const VecZ& center() const noexcept { return center_; }

    /// Smallest constraint slack at z (positive = strictly feasible).
    double min_slack(const VecZ& z) const;
    bool strictly_feasible(const VecZ& z) const { return min_slack(z) > 0.0; }

    /// Largest step along dir from a strictly feasible z before some
    /// constraint becomes active (+inf when unbounded).
    double max_step(const VecZ& z, const VecZ& dir) const;

    /// Mutual information and its derivatives in z. Probabilities are floored
    /// at 1e-12 inside the derivatives only; the value uses 0 log 0 = 0.
    ObjectiveValue information(const VecZ& z) const;

    /// Barrier -sum log(slack) and its derivatives; value +inf outside.
    ObjectiveValue barrier(const VecZ& z) const;
    int constraint_count() const noexcept;

    /// Random strictly feasible point: a radial draw from the center followed
    /// by a few hit-and-run moves.
    VecZ random_point(std::mt19937_64& rng, int hit_and_run_steps = 3) const;

private:
    struct Affine {
        double offset = 0.0;
        VecZ coef;
    };

    void add_linear_constraint(const Vec8& row, double rhs);  // row . c <= rhs
    double nonlinear_slack(const Vec8& c, int k) const;

    SetKind set_;
    Relaxation relaxation_;
    double s_;
    Vec8 offset_;
    Eigen::Matrix<double, 8, Eigen::Dynamic, 0, 8, 8> basis_;
    MatZ gram_inverse_;
    VecZ center_;

    std::vector<Affine> info_terms_;      // affine arguments of u log u
    std::vector<double> info_weights_;
    std::vector<Affine> linear_slacks_;   // > 0 when feasible
    bool arcsin_active_ = false;          // arcsin constraints depend on z
};

}  // namespace nonsig
