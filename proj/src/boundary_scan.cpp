#include "nonsig/boundary_scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"
#include "parallel.hpp"

namespace nonsig {

namespace {

// Large enough that the first centering stays in the basin of the start.
constexpr double kInitialBarrierWeight = 1e3;
constexpr double kBarrierGrowth = 10.0;
constexpr int kMaxNewtonSteps = 200;
constexpr int kMaxBacktracks = 60;
constexpr double kArmijo = 1e-4;
constexpr double kWarmBlend = 1e-3;
constexpr int kMaxEscapes = 20;
// Relative size of a Hessian eigenvalue that counts as negative curvature.
constexpr double kCurvatureTol = 1e-9;

bool better(Mode mode, double candidate, double incumbent) {
    return mode == Mode::Max ? candidate > incumbent : candidate < incumbent;
}

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

// Moves a feasible point of some other S onto the slice of `space`: mixing
// with a point of larger (or smaller) canonical CHSH value keeps every
// signed expression below the canonical one, then a small pull towards the
// center restores strict feasibility.
std::optional<VecZ> transport(const SearchSpace& space, const Correlators& from) {
    if (space.dim() == 0) return std::nullopt;
    const double s = space.s();
    const double s_from = chsh_linear(from, 0);
    const Vec8 c_from = to_vec8(from);
    Vec8 blended = c_from;
    if (s > s_from + 1e-15) {
        const double top = feasible_s_range(space.set(), space.relaxation()).second;
        Vec8 target;
        if (space.relaxation() == Relaxation::None) {
            target = to_vec8(named_correlators(NamedTag::PR));
        } else {
            const double q = top * (1.0 - 1e-6) / 4.0;
            target = Vec8::Zero();
            target.tail<4>() << q, q, q, -q;
        }
        const double s_target = chsh_linear(from_vec8(target), 0);
        if (s_target <= s) return std::nullopt;
        const double theta = (s - s_from) / (s_target - s_from);
        blended = (1.0 - theta) * c_from + theta * target;
    } else if (s < s_from - 1e-15) {
        if (s_from <= 0.0) return std::nullopt;
        blended = (s / s_from) * c_from;
    }
    const Vec8 center = to_vec8(space.correlators(space.center()));
    const Correlators warm = from_vec8((1.0 - kWarmBlend) * blended + kWarmBlend * center);
    if (!space.contains_affinely(warm, 1e-9)) return std::nullopt;
    VecZ z = space.coordinates(warm);
    if (!space.strictly_feasible(z)) return std::nullopt;
    return z;
}

OptimizeResult best_of(const SearchSpace& space, Mode mode, const std::vector<VecZ>& starts, double tol,
                       std::optional<OptimizeResult> incumbent = std::nullopt) {
    std::optional<OptimizeResult> best = std::move(incumbent);
    for (const auto& z : starts) {
        OptimizeResult r = solve_from(space, mode, z, tol);
        if (!std::isfinite(r.i)) continue;
        if (!best || better(mode, r.i, best->i)) best = r;
    }
    if (!best) {
        OptimizeResult fallback;
        fallback.argopt = space.correlators(space.center());
        fallback.i = mutual_information(correlators_to_behavior(fallback.argopt));
        fallback.converged = false;
        return fallback;
    }
    return *best;
}

}  // namespace

std::string to_string(Mode mode) { return mode == Mode::Min ? "min" : "max"; }

std::optional<Mode> parse_mode(const std::string& name) {
    if (name == "min") return Mode::Min;
    if (name == "max") return Mode::Max;
    return std::nullopt;
}

void ScanConfig::check() const {
    const auto [lo, hi] = feasible_s_range(set, relaxation);
    if (!(s_lo < s_hi)) throw DomainError("scan requires s_lo < s_hi");
    if (s_lo < lo - 1e-12 || s_hi > hi + 1e-12) {
        std::ostringstream os;
        os << "scan range [" << s_lo << ", " << s_hi << "] leaves the feasible range [" << lo << ", " << hi << "]";
        throw DomainError(os.str());
    }
    if (grid_points < 2) throw DomainError("scan requires at least 2 grid points");
    if (restarts < 1) throw DomainError("scan requires at least 1 restart");
    if (!(tol > 0.0)) throw DomainError("scan tolerance must be positive");
    if (warm_sweeps < 0) throw DomainError("warm_sweeps must be non-negative");
}

double ScanConfig::grid_s(int index) const {
    if (index == grid_points - 1) return s_hi;
    return s_lo + (s_hi - s_lo) * index / (grid_points - 1);
}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NONSIG_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
    return n;
}

OptimizeResult solve_from(const SearchSpace& space, Mode mode, const VecZ& start, double tol) {
    OptimizeResult result;
    const int d = space.dim();
    if (d == 0) {
        result.argopt = space.correlators(start);
        result.i = mutual_information(correlators_to_behavior(result.argopt));
        result.converged = true;
        return result;
    }

    const double sense = mode == Mode::Max ? -1.0 : 1.0;
    const int m = std::max(1, space.constraint_count());
    auto merit = [&](const VecZ& z, double t) {
        const auto b = space.barrier(z);
        if (!std::isfinite(b.value)) return std::numeric_limits<double>::infinity();
        return t * sense * space.information(z).value + b.value;
    };

    VecZ z = start;
    auto escape_saddle = [&](VecZ& at, const Eigen::SelfAdjointEigenSolver<MatZ>& eig, double phi, double t) {
        const double lambda = eig.eigenvalues()(0);
        const double scale = eig.eigenvalues().cwiseAbs().maxCoeff();
        if (!(lambda < -kCurvatureTol * std::max(1.0, scale))) return false;
        const VecZ v = eig.eigenvectors().col(0);
        for (double sign : {1.0, -1.0}) {
            const VecZ dir = sign * v;
            double alpha = 0.5 * space.max_step(at, dir);
            if (!std::isfinite(alpha)) alpha = 1.0;
            for (int bt = 0; bt < kMaxBacktracks; ++bt) {
                const VecZ trial = at + alpha * dir;
                const double value = merit(trial, t);
                if (std::isfinite(value) && value < phi + 0.25 * lambda * alpha * alpha) {
                    at = trial;
                    return true;
                }
                alpha *= 0.5;
            }
        }
        return false;
    };
    double t = kInitialBarrierWeight;
    bool centered = false;
    while (true) {
        centered = false;
        int escapes = 0;
        const double stop = std::max(1e-10, 1e-3 * tol * t);
        for (int step = 0; step < kMaxNewtonSteps; ++step) {
            const auto info = space.information(z);
            const auto bar = space.barrier(z);
            const double phi = t * sense * info.value + bar.value;
            const VecZ grad = t * sense * info.gradient + bar.gradient;
            const MatZ hess = t * sense * info.hessian + bar.hessian;
            if (!grad.allFinite() || !hess.allFinite() || !std::isfinite(phi)) break;

            // Newton direction on the absolute-value modified Hessian, so the
            // step descends even where the objective is concave.
            Eigen::SelfAdjointEigenSolver<MatZ> eig(hess);
            VecZ lambda = eig.eigenvalues().cwiseAbs();
            const double floor = 1e-12 * std::max(1.0, lambda.maxCoeff());
            lambda = lambda.cwiseMax(floor);
            const VecZ dz = -(eig.eigenvectors() * (eig.eigenvectors().transpose() * grad).cwiseQuotient(lambda));
            const double decrement = -grad.dot(dz);
            if (decrement / 2.0 <= stop) {
                // A stationary point with negative curvature is a saddle:
                // symmetric points (zero marginals) often are. Leave it along
                // the most negative eigenvector before declaring it centered.
                if (escapes < kMaxEscapes && escape_saddle(z, eig, phi, t)) {
                    ++escapes;
                    continue;
                }
                centered = true;
                break;
            }

            double alpha = std::min(1.0, 0.99 * space.max_step(z, dz));
            bool accepted = false;
            for (int bt = 0; bt < kMaxBacktracks; ++bt) {
                const VecZ trial = z + alpha * dz;
                const double value = merit(trial, t);
                if (std::isfinite(value) && value <= phi - kArmijo * alpha * decrement) {
                    z = trial;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!accepted) {
                // No representable decrease left; accept when the remaining
                // decrement is negligible on the objective scale.
                centered = decrement / (2.0 * t) <= 1e-3 * tol;
                break;
            }
        }
        if (static_cast<double>(m) / t <= tol) break;
        t *= kBarrierGrowth;
    }

    result.argopt = space.correlators(z);
    result.i = mutual_information(correlators_to_behavior(result.argopt));
    result.converged = centered;
    return result;
}

OptimizeResult optimize_at_s(SetKind set, Mode mode, double s, const OptimizerOptions& options,
                             const std::vector<Correlators>& warm_starts, Relaxation relaxation) {
    const SearchSpace space(set, s, relaxation);
    std::vector<VecZ> starts;
    if (space.dim() == 0) {
        starts.push_back(space.center());
        return best_of(space, mode, starts, options.tol);
    }
    auto rng = make_rng(options.seed, options.stream);
    for (const auto& c : warm_starts)
        if (auto z = transport(space, c)) starts.push_back(*z);
    if (options.restarts > 0) starts.push_back(space.center());
    for (int k = 1; k < options.restarts; ++k) starts.push_back(space.random_point(rng));
    return best_of(space, mode, starts, options.tol);
}

BoundaryCurve scan(const ScanConfig& config) {
    config.check();
    const int n = config.grid_points;
    BoundaryCurve curve;
    curve.config = config;
    curve.points.resize(static_cast<std::size_t>(n));

    std::vector<OptimizeResult> current(static_cast<std::size_t>(n));
    std::vector<bool> failed(static_cast<std::size_t>(n), false);

    detail::parallel_for(n, [&](int k) {
        const auto idx = static_cast<std::size_t>(k);
        try {
            OptimizerOptions opt{config.restarts, config.tol, config.seed, static_cast<std::uint64_t>(k)};
            current[idx] = optimize_at_s(config.set, config.mode, config.grid_s(k), opt, {}, config.relaxation);
        } catch (const std::exception&) {
            failed[idx] = true;
            current[idx].i = std::numeric_limits<double>::quiet_NaN();
        }
    });

    for (int sweep = 0; sweep < config.warm_sweeps; ++sweep) {
        std::vector<OptimizeResult> next = current;
        detail::parallel_for(n, [&](int k) {
            const auto idx = static_cast<std::size_t>(k);
            if (failed[idx]) return;
            try {
                const SearchSpace space(config.set, config.grid_s(k), config.relaxation);
                std::vector<VecZ> starts;
                for (int nb : {k - 1, k + 1}) {
                    if (nb < 0 || nb >= n || failed[static_cast<std::size_t>(nb)]) continue;
                    if (auto z = transport(space, current[static_cast<std::size_t>(nb)].argopt)) starts.push_back(*z);
                }
                next[idx] = best_of(space, config.mode, starts, config.tol, current[idx]);
            } catch (const std::exception&) {
                // keep the previous result for this point
            }
        });
        current = std::move(next);
    }

    for (int k = 0; k < n; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        auto& p = curve.points[idx];
        p.s = config.grid_s(k);
        p.i = current[idx].i;
        p.argopt = current[idx].argopt;
        p.converged = !failed[idx] && current[idx].converged;
    }
    return curve;
}

FillReport vertical_fill_check(const Correlators& argmin, const Correlators& argmax, double s, int n_samples,
                               double resolution) {
    if (n_samples < 2) throw DomainError("fill check needs at least 2 samples");
    const Vec8 lo = to_vec8(argmin);
    const Vec8 hi = to_vec8(argmax);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n_samples));
    FillReport report;
    for (int k = 0; k < n_samples; ++k) {
        const double lambda = static_cast<double>(k) / (n_samples - 1);
        const auto p = correlators_to_behavior(from_vec8((1.0 - lambda) * lo + lambda * hi));
        report.s_deviation = std::max(report.s_deviation, std::abs(s_max(p) - s));
        values.push_back(mutual_information(p));
    }
    report.i_min = values.front();
    report.i_max = values.back();
    std::sort(values.begin(), values.end());
    for (std::size_t k = 1; k < values.size(); ++k) report.max_gap = std::max(report.max_gap, values[k] - values[k - 1]);
    report.filled = report.s_deviation <= 1e-6 && report.max_gap <= resolution && values.front() >= report.i_min - 1e-7 &&
                    values.back() <= report.i_max + 1e-7;
    return report;
}

FillReport vertical_fill_check(double s, int n_samples, const OptimizerOptions& options, double resolution) {
    const auto lo = optimize_at_s(SetKind::NS, Mode::Min, s, options);
    const auto hi = optimize_at_s(SetKind::NS, Mode::Max, s, options);
    return vertical_fill_check(lo.argopt, hi.argopt, s, n_samples, resolution);
}

}  // namespace nonsig
