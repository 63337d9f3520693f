#pragma once

// The two scalar functionals of a behavior: the relabeling-maximized CHSH
// value S in [0, 4] and the input-averaged mutual information I in bits.

#include <array>

#include "nonsig/behavior.hpp"

namespace nonsig {

inline constexpr int kChshSlots = 8;

/// A point of the S-I plane.
struct FunctionalPoint {
    double s = 0.0;
    double i = 0.0;
};

/// Signs e[x][y] of the signed CHSH expression sum_xy e[x][y] <A_x B_y>.
/// Slots 0..3 put the minus sign on (1,1), (0,0), (0,1), (1,0); slots 4..7
/// are their negatives. Slot 0 is <A0B0> + <A0B1> + <A1B0> - <A1B1>.
std::array<std::array<int, 2>, 2> chsh_sign_pattern(int slot);

double chsh_linear(const Correlators& c, int slot);
double chsh_linear(const Behavior& p, int slot);

/// max over (x,y) of |sum <A_x'B_y'> - 2 <A_xB_y>|.
double s_max(const Correlators& c) noexcept;
double s_max(const Behavior& p) noexcept;

/// Slot attaining s_max (lowest index on ties).
int argmax_slot(const Correlators& c) noexcept;

/// u log2 u with 0 log 0 = 0; arguments below 1e-300 count as zero.
double xlog2x(double u) noexcept;

/// Input-averaged mutual information I(A;B|XY) in bits, uniform inputs,
/// evaluated from the probability table.
double mutual_information(const Behavior& p) noexcept;

FunctionalPoint functional_point(const Behavior& p) noexcept;

/// g(x) = (1 + ((1+x)/4) log2((1+x)/4) + ((1-x)/4) log2((1-x)/4)) / 2.
/// Inputs within 1e-12 outside [-1,1] are clamped; farther ones throw.
double g(double x);

/// Mutual information of a zero-marginal behavior, sum_xy g(<A_x B_y>).
/// Throws DomainError when a marginal is nonzero (beyond 1e-12).
double correlation_space_info(const Correlators& c);

}  // namespace nonsig
