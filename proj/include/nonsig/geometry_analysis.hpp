#pragma once

// Shape analysis of sampled boundary curves: the turning direction of point
// triples (concavity), the abscissa where it flips, and the mean values of
// the optimizers along a symmetric scan.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nonsig/behavior.hpp"
#include "nonsig/boundary_scan.hpp"

namespace nonsig {

struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
};

/// det [[1, xA, yA], [1, xB, yB], [1, xC, yC]]; positive when A, B, C turn
/// counterclockwise.
double orientation_det(PlanePoint a, PlanePoint b, PlanePoint c) noexcept;

struct OrientationSample {
    double s = 0.0;  // abscissa of the first point of the triple
    double det = 0.0;
};

/// Determinants of the triples (i, i + k, i + 2k). Spaced triples keep the
/// determinant well above the rounding level of neighboring samples.
/// Throws DomainError for fewer than 2k + 1 points, k < 1 or a grid that is
/// not uniform.
std::vector<OrientationSample> concavity_profile(std::span<const PlanePoint> points, int k = 100);
std::vector<OrientationSample> concavity_profile(const BoundaryCurve& curve, int k = 100);

struct InflectionEstimate {
    double s_star = 0.0;
    double uncertainty = 0.0;
    double transition_lo = 0.0;
    double transition_hi = 0.0;
};

/// Finds the single persistent sign change of a profile. Runs of one sign
/// shorter than k samples are treated as noise, and |det| <= zero_tol has no
/// sign. A triple starting at s spans [s, s + 2k ds], so the band of mixed
/// triples around the change at s_c is [s_c - k ds, s_c + k ds] and s_star
/// is its upper end. Throws AnalysisError unless exactly one change exists.
InflectionEstimate locate_inflection(std::span<const OrientationSample> profile, double ds, int k = 100,
                                     double zero_tol = 1e-12);

/// Mean values of a symmetric behavior along a scan.
struct Trajectory {
    std::vector<double> s;
    std::vector<double> a0;   // <A_0> = <B_0>
    std::vector<double> a1;   // <A_1> = <B_1>
    std::vector<double> c00;
    std::vector<double> c01;  // <A_0B_1> = <A_1B_0>
    std::vector<double> c11;

    static constexpr std::array<const char*, 5> kNames{"a0", "a1", "c00", "c01", "c11"};
    const std::vector<double>& series(int index) const;
};

/// Representative of c among its relabelings that stay symmetric and keep
/// the canonical CHSH value: prefers <A_0B_0> >= <A_1B_1>, then
/// <A_0> + <A_1> >= 0, then the image closest to c.
Correlators canonicalize_symmetric(const Correlators& c, double tol = 1e-9);

/// Canonicalized series of a symmetric scan. Throws ValidationError when an
/// optimizer is not symmetric within 1e-7.
Trajectory trajectory(const BoundaryCurve& curve);

struct Kink {
    double s = 0.0;
    /// Slope jump divided by the typical (median) jump of the series.
    double strength = 0.0;
    std::vector<std::string> series;
};

/// Slope discontinuities of y(s): at every sample, lines are fitted to the
/// `window` samples on each side; the difference of their slopes is the
/// jump. Samples whose jump exceeds `factor` times the median jump fire, and
/// firings closer than one window form a single kink located at the largest
/// jump.
std::vector<Kink> detect_kinks(std::span<const double> s, std::span<const double> y, int window = 50,
                               double factor = 10.0);

/// detect_kinks over the five series, with kinks closer than one window
/// across series merged.
std::vector<Kink> trajectory_kinks(const Trajectory& t, int window = 50, double factor = 10.0);

}  // namespace nonsig
