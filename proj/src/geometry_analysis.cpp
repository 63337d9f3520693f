#include "nonsig/geometry_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"

namespace nonsig {

namespace {

constexpr double kUniformTol = 1e-6;
constexpr double kSymmetryTol = 1e-7;
// Keeps a series with exactly linear stretches from firing on rounding.
constexpr double kJumpFloor = 1e-9;

void check_uniform(std::span<const double> x) {
    const double ds = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    if (!(ds > 0.0)) throw DomainError("abscissae must increase");
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (std::abs((x[i] - x[i - 1]) - ds) > kUniformTol * ds) {
            std::ostringstream os;
            os << "grid is not uniform at index " << i;
            throw DomainError(os.str());
        }
    }
}

double fitted_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

int sign_of(double v, double tol) { return v > tol ? 1 : (v < -tol ? -1 : 0); }

}  // namespace

double orientation_det(PlanePoint a, PlanePoint b, PlanePoint c) noexcept {
    return (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
}

std::vector<OrientationSample> concavity_profile(std::span<const PlanePoint> points, int k) {
    if (k < 1) throw DomainError("triple spacing k must be positive");
    const std::size_t need = 2 * static_cast<std::size_t>(k) + 1;
    if (points.size() < need) {
        std::ostringstream os;
        os << "curve has " << points.size() << " points, spacing k = " << k << " needs at least " << need;
        throw DomainError(os.str());
    }
    std::vector<double> x(points.size());
    std::transform(points.begin(), points.end(), x.begin(), [](const PlanePoint& p) { return p.x; });
    check_uniform(x);

    std::vector<OrientationSample> out;
    out.reserve(points.size() - 2 * static_cast<std::size_t>(k));
    for (std::size_t i = 0; i + 2 * k < points.size(); ++i)
        out.push_back({points[i].x, orientation_det(points[i], points[i + k], points[i + 2 * k])});
    return out;
}

std::vector<OrientationSample> concavity_profile(const BoundaryCurve& curve, int k) {
    std::vector<PlanePoint> points;
    points.reserve(curve.points.size());
    for (const auto& p : curve.points) points.push_back({p.s, p.i});
    return concavity_profile(points, k);
}

InflectionEstimate locate_inflection(std::span<const OrientationSample> profile, double ds, int k, double zero_tol) {
    if (!(ds > 0.0)) throw DomainError("grid spacing must be positive");
    if (k < 1) throw DomainError("persistence window k must be positive");

    struct Run {
        int sign;
        std::size_t first;
        std::size_t last;
    };
    // Persistent runs, with neighbors of equal sign merged across noise.
    std::vector<Run> runs;
    std::size_t i = 0;
    while (i < profile.size()) {
        const int sg = sign_of(profile[i].det, zero_tol);
        std::size_t j = i;
        while (j + 1 < profile.size() && sign_of(profile[j + 1].det, zero_tol) == sg) ++j;
        if (sg != 0 && j - i + 1 >= static_cast<std::size_t>(k)) {
            if (!runs.empty() && runs.back().sign == sg)
                runs.back().last = j;
            else
                runs.push_back({sg, i, j});
        }
        i = j + 1;
    }

    if (runs.size() != 2) {
        std::ostringstream os;
        if (runs.size() < 2) {
            os << "no persistent sign change in the concavity profile (" << profile.size() << " samples, "
               << runs.size() << " persistent run" << (runs.size() == 1 ? "" : "s") << ")";
        } else {
            os << runs.size() - 1 << " persistent sign changes, at s =";
            for (std::size_t r = 1; r < runs.size(); ++r)
                os << ' ' << 0.5 * (profile[runs[r - 1].last].s + profile[runs[r].first].s);
        }
        throw AnalysisError(os.str());
    }

    const double before = profile[runs[0].last].s;
    const double after = profile[runs[1].first].s;
    const double s_c = 0.5 * (before + after);
    const double half = k * ds;
    InflectionEstimate est;
    est.transition_lo = std::min(s_c - half, before);
    est.transition_hi = std::max(s_c + half, after);
    est.s_star = est.transition_hi;
    est.uncertainty = std::max(half, 0.5 * (est.transition_hi - est.transition_lo));
    return est;
}

const std::vector<double>& Trajectory::series(int index) const {
    switch (index) {
        case 0: return a0;
        case 1: return a1;
        case 2: return c00;
        case 3: return c01;
        case 4: return c11;
    }
    throw DomainError("trajectory series index out of range");
}

Correlators canonicalize_symmetric(const Correlators& c, double tol) {
    const double canonical = chsh_linear(c, 0);
    std::vector<Correlators> images;
    for (int code = 0; code < 64; ++code) {
        Relabeling r;
        r.swap_x = code & 1;
        r.swap_y = code & 2;
        r.flip_a = {bool(code & 4), bool(code & 8)};
        r.flip_b = {bool(code & 16), bool(code & 32)};
        const Correlators img = r.apply(c);
        if (is_symmetric(img, tol) && std::abs(chsh_linear(img, 0) - canonical) <= tol) images.push_back(img);
    }
    if (images.empty()) return c;

    auto keep_if_any = [&](auto pred) {
        std::vector<Correlators> kept;
        std::copy_if(images.begin(), images.end(), std::back_inserter(kept), pred);
        if (!kept.empty()) images = std::move(kept);
    };
    keep_if_any([&](const Correlators& x) { return x.ab[0][0] >= x.ab[1][1] - tol; });
    keep_if_any([&](const Correlators& x) { return x.a[0] + x.a[1] >= -tol; });
    return *std::min_element(images.begin(), images.end(), [&](const Correlators& x, const Correlators& y) {
        return max_abs_diff(x, c) < max_abs_diff(y, c);
    });
}

Trajectory trajectory(const BoundaryCurve& curve) {
    Trajectory t;
    for (const auto& p : curve.points) {
        if (!is_symmetric(p.argopt, kSymmetryTol)) {
            std::ostringstream os;
            os << "trajectory needs a symmetric scan; the optimizer at S = " << p.s << " is not symmetric";
            throw ValidationError(os.str());
        }
        const Correlators c = canonicalize_symmetric(p.argopt);
        t.s.push_back(p.s);
        t.a0.push_back(c.a[0]);
        t.a1.push_back(c.a[1]);
        t.c00.push_back(c.ab[0][0]);
        t.c01.push_back(c.ab[0][1]);
        t.c11.push_back(c.ab[1][1]);
    }
    return t;
}

std::vector<Kink> detect_kinks(std::span<const double> s, std::span<const double> y, int window, double factor) {
    if (s.size() != y.size()) throw DomainError("series lengths differ");
    if (window < 2) throw DomainError("fit window needs at least 2 samples");
    const std::size_t w = static_cast<std::size_t>(window);
    if (s.size() < 2 * w + 1) throw DomainError("series too short for the fit window");

    std::vector<double> jump(s.size(), 0.0);
    std::vector<double> all;
    for (std::size_t i = w; i + w <= s.size(); ++i) {
        const double left = fitted_slope(s.subspan(i - w, w), y.subspan(i - w, w));
        const double right = fitted_slope(s.subspan(i, w), y.subspan(i, w));
        jump[i] = std::abs(right - left);
        all.push_back(jump[i]);
    }
    std::nth_element(all.begin(), all.begin() + all.size() / 2, all.end());
    const double threshold = factor * std::max(all[all.size() / 2], kJumpFloor);

    std::vector<Kink> kinks;
    std::size_t last_fire = 0;
    std::size_t best = 0;
    bool open = false;
    auto close = [&] {
        kinks.push_back({s[best], jump[best] / (threshold / factor), {}});
        open = false;
    };
    for (std::size_t i = w; i + w <= s.size(); ++i) {
        if (jump[i] <= threshold) continue;
        if (open && i - last_fire > w) close();
        if (!open) {
            open = true;
            best = i;
        }
        if (jump[i] > jump[best]) best = i;
        last_fire = i;
    }
    if (open) close();
    return kinks;
}

std::vector<Kink> trajectory_kinks(const Trajectory& t, int window, double factor) {
    std::vector<Kink> all;
    for (int q = 0; q < 5; ++q) {
        for (auto kink : detect_kinks(t.s, t.series(q), window, factor)) {
            kink.series = {Trajectory::kNames[static_cast<std::size_t>(q)]};
            all.push_back(std::move(kink));
        }
    }
    std::sort(all.begin(), all.end(), [](const Kink& a, const Kink& b) { return a.s < b.s; });
    const double reach = t.s.size() > 1 ? window * (t.s.back() - t.s.front()) / (t.s.size() - 1) : 0.0;
    std::vector<Kink> merged;
    for (auto& kink : all) {
        if (!merged.empty() && kink.s - merged.back().s <= reach) {
            auto& m = merged.back();
            if (kink.strength > m.strength) {
                m.s = kink.s;
                m.strength = kink.strength;
            }
            m.series.insert(m.series.end(), kink.series.begin(), kink.series.end());
        } else {
            merged.push_back(std::move(kink));
        }
    }
    return merged;
}

}  // namespace nonsig
