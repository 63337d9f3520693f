#pragma once

// Numerical boundaries I_min(S) / I_max(S) over NS, SYM and the correlation
// space. Each grid point fixes the canonical CHSH expression to s, keeps the
// other seven signed expressions at or below s, and optimizes the mutual
// information with a multi-start log-barrier Newton method.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nonsig/behavior.hpp"
#include "nonsig/search_space.hpp"

namespace nonsig {

enum class Mode { Min, Max };

std::string to_string(Mode mode);
std::optional<Mode> parse_mode(const std::string& name);

struct ScanConfig {
    SetKind set = SetKind::NS;
    Mode mode = Mode::Max;
    Relaxation relaxation = Relaxation::None;
    double s_lo = 0.0;
    double s_hi = 4.0;
    int grid_points = 200;
    int restarts = 50;
    /// Target barrier duality gap, i.e. the accuracy of each optimum in I.
    double tol = 1e-8;
    std::uint64_t seed = 0;
    /// Passes in which each point is re-solved from its neighbors' optima.
    int warm_sweeps = 2;

    /// Throws DomainError on an inconsistent configuration.
    void check() const;
    double grid_s(int index) const;
};

struct OptimizerOptions {
    int restarts = 50;
    double tol = 1e-8;
    std::uint64_t seed = 0;
    /// Distinguishes independent random streams sharing one seed (the grid
    /// index during a scan).
    std::uint64_t stream = 0;
};

struct OptimizeResult {
    double i = 0.0;
    Correlators argopt;
    bool converged = false;
};

/// Best local optimum over `restarts` random strictly feasible starts plus
/// the supplied warm starts (correlators at any S of the same set; they are
/// transported to S = s before use, and skipped when that fails).
OptimizeResult optimize_at_s(SetKind set, Mode mode, double s, const OptimizerOptions& options,
                             const std::vector<Correlators>& warm_starts = {},
                             Relaxation relaxation = Relaxation::None);

/// Single barrier-method run from a strictly feasible point of `space`.
OptimizeResult solve_from(const SearchSpace& space, Mode mode, const VecZ& start, double tol);

struct CurvePoint {
    double s = 0.0;
    double i = 0.0;
    Correlators argopt;
    bool converged = false;
};

struct BoundaryCurve {
    std::vector<CurvePoint> points;
    ScanConfig config;
};

/// Runs optimize_at_s over the grid, then `warm_sweeps` passes that restart
/// every point from its neighbors' optima. Grid points are spread over a
/// worker pool (NONSIG_THREADS caps it); results are independent of the
/// scheduling. Per-point failures are reported as converged = false.
BoundaryCurve scan(const ScanConfig& config);

/// Worker count: NONSIG_THREADS when set and positive, else the hardware
/// concurrency.
unsigned worker_count();

struct FillReport {
    bool filled = false;
    double i_min = 0.0;
    double i_max = 0.0;
    /// Largest gap between consecutive sorted I values along the segment.
    double max_gap = 0.0;
    /// Largest |S - s| along the segment.
    double s_deviation = 0.0;
};

/// Samples n_samples convex combinations of the two behaviors (which must
/// share the canonical CHSH value s) and checks that each keeps S = s and
/// that their I values cover [i_min, i_max] without gaps above `resolution`.
FillReport vertical_fill_check(const Correlators& argmin, const Correlators& argmax, double s, int n_samples,
                               double resolution = 0.02);

/// Same, with the extremes obtained by optimize_at_s over NS.
FillReport vertical_fill_check(double s, int n_samples, const OptimizerOptions& options = {},
                               double resolution = 0.02);

}  // namespace nonsig
