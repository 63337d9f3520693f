#include "nonsig/repro.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "nonsig/analytic_curves.hpp"
#include "nonsig/boundary_scan.hpp"
#include "nonsig/errors.hpp"
#include "nonsig/functionals.hpp"
#include "nonsig/geometry_analysis.hpp"
#include "nonsig/io.hpp"
#include "nonsig/membership.hpp"
#include "nonsig/quantum_sampler.hpp"

namespace nonsig {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

class Recipe {
public:
    explicit Recipe(const ReproOptions& options) : options_(options), start_(Clock::now()) {}

    int pick(std::optional<int> override_value, int desk, int full) const {
        return override_value.value_or(options_.full_scale ? full : desk);
    }
    int restarts(int desk) const { return options_.restarts.value_or(desk); }

    BoundaryCurve scan(SetKind set, Mode mode, double lo, double hi, int n, int restarts,
                       Relaxation relaxation = Relaxation::None) const {
        ScanConfig c;
        c.set = set;
        c.mode = mode;
        c.relaxation = relaxation;
        c.s_lo = lo;
        c.s_hi = hi;
        c.grid_points = n;
        c.restarts = restarts;
        c.seed = options_.seed;
        return nonsig::scan(c);
    }

    void emit(const std::string& name, const std::string& text) {
        const auto path = options_.out_dir / name;
        write_text_file(path, text);
        RunManifest m;
        m.command_line = options_.command_line;
        m.seed = options_.seed;
        m.wall_time = std::chrono::duration<double>(Clock::now() - start_).count();
        m.add_output(path);
        write_text_file(manifest_path_for(path), m.to_json());
        result_.outputs.push_back(path);
    }

    void emit_curve(const std::string& name, const BoundaryCurve& curve) {
        std::ostringstream os;
        write_curve_csv(os, curve);
        emit(name, os.str());
    }

    ReproResult finish(std::string summary) {
        result_.summary_json = std::move(summary);
        return std::move(result_);
    }

    const ReproOptions& options() const { return options_; }

private:
    const ReproOptions& options_;
    Clock::time_point start_;
    ReproResult result_;
};

int nonconverged(const BoundaryCurve& c) {
    int n = 0;
    for (const auto& p : c.points) n += !p.converged;
    return n;
}

// Largest |I_scan - reference(S)| over points with S in [lo, hi].
template <typename F>
double deviation(const BoundaryCurve& c, F reference, double lo, double hi) {
    double worst = 0.0;
    for (const auto& p : c.points)
        if (p.s >= lo - 1e-12 && p.s <= hi + 1e-12) worst = std::max(worst, std::abs(p.i - reference(p.s)));
    return worst;
}

std::string analytic_csv(std::initializer_list<CurveId> ids, int n) {
    std::ostringstream os;
    os << "curve,s,i\n";
    for (auto id : ids)
        for (const auto& [s, i] : sample_curve(id, n))
            os << to_string(id) << ',' << format_double(s) << ',' << format_double(i) << '\n';
    return os.str();
}

ReproResult fig3(const ReproOptions& o) {
    Recipe r(o);
    const int n_max = r.pick(o.grid, 200, 700);
    const int n_min = r.pick(o.grid ? std::optional<int>(std::max(2, *o.grid * 3 / 4)) : std::nullopt, 150, 500);
    const auto max = r.scan(SetKind::NS, Mode::Max, 0.0, 4.0, n_max, r.restarts(50));
    const auto min = r.scan(SetKind::NS, Mode::Min, 2.0, 4.0, n_min, r.restarts(50));
    r.emit_curve("fig3_ns_max.csv", max);
    r.emit_curve("fig3_ns_min.csv", min);
    r.emit("fig3_analytic.csv", analytic_csv({CurveId::LocalMax, CurveId::CNonlocalMax, CurveId::LdPrMax,
                                              CurveId::NsMax, CurveId::BellPrMin},
                                             200));
    json s;
    s["ns_max_deviation"] = deviation(max, ns_max, 0.0, 4.0);
    s["ns_min_post_quantum_deviation"] = deviation(min, bell_pr_min, kTsirelson, 4.0);
    s["nonconverged"] = nonconverged(max) + nonconverged(min);
    return r.finish(s.dump(2));
}

ReproResult fig4(const ReproOptions& o) {
    Recipe r(o);
    const int n_max = r.pick(o.grid, 200, 700);
    const int n_min = r.pick(o.grid ? std::optional<int>(std::max(2, *o.grid * 3 / 4)) : std::nullopt, 150, 500);
    const int n_q = r.pick(o.grid ? std::optional<int>(std::max(2, *o.grid / 4)) : std::nullopt, 50, 200);
    const auto sym_max = r.scan(SetKind::SYM, Mode::Max, 0.0, 4.0, n_max, r.restarts(50));
    const auto sym_min = r.scan(SetKind::SYM, Mode::Min, 2.0, 4.0, n_min, r.restarts(50));
    const auto c_max = r.scan(SetKind::C, Mode::Max, 2.0, 4.0, n_min, r.restarts(50));
    const auto q_max = r.scan(SetKind::NS, Mode::Max, 2.0, kTsirelson, n_q, r.restarts(50), Relaxation::QTilde);
    const auto qc = r.scan(SetKind::C, Mode::Max, 2.0, kTsirelson, n_q, r.restarts(50), Relaxation::QTilde);
    r.emit_curve("fig4_sym_max.csv", sym_max);
    r.emit_curve("fig4_sym_min.csv", sym_min);
    r.emit_curve("fig4_c_max.csv", c_max);
    r.emit_curve("fig4_qtilde_max.csv", q_max);
    r.emit_curve("fig4_c_qtilde_max.csv", qc);
    r.emit("fig4_analytic.csv", analytic_csv({CurveId::LocalMax, CurveId::CNonlocalMax, CurveId::LdPrMax,
                                              CurveId::QcMax, CurveId::BellPrMin},
                                             200));
    json s;
    s["sym_max_vs_ns_max"] = deviation(sym_max, ns_max, 0.0, 4.0);
    s["sym_min_post_quantum_deviation"] = deviation(sym_min, bell_pr_min, kTsirelson, 4.0);
    s["c_max_vs_c_nonlocal_max"] = deviation(c_max, c_nonlocal_max, 2.0, 4.0);
    s["c_qtilde_max_vs_qc_max"] = deviation(qc, qc_max, 2.0, kTsirelson);
    s["nonconverged"] =
        nonconverged(sym_max) + nonconverged(sym_min) + nonconverged(c_max) + nonconverged(q_max) + nonconverged(qc);
    return r.finish(s.dump(2));
}

ReproResult fig5(const ReproOptions& o) {
    Recipe r(o);
    const std::size_t n = o.samples.value_or(o.full_scale ? 5'000'000 : 100'000);
    const auto quantum = sample(n, o.seed);
    {
        std::ostringstream os;
        write_sample_csv(os, quantum, false);
        r.emit("fig5_quantum.csv", os.str());
    }

    double s_top = 0.0;
    int npa_failures = 0;
    int above_qc = 0;
    int near_c = 0;
    for (const auto& p : quantum) {
        const auto fp = functional_point(p);
        s_top = std::max(s_top, fp.s);
        if (!npa1_test(p).passed) ++npa_failures;
        const auto c = p.correlators();
        if (has_zero_marginals(c, 1e-6)) {
            ++near_c;
            if (fp.i > qc_max(std::clamp(fp.s, 2.0, kTsirelson)) + 1e-6) ++above_qc;
        }
    }

    // Uniform convex combinations of the shared coin, Bell and PR behaviors.
    constexpr int kMixtures = 10'000;
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32), 0x3u};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> expo;
    const Behavior sc = named(NamedTag::SC).behavior;
    const Behavior bell = named(NamedTag::Bell).behavior;
    const Behavior pr = named(NamedTag::PR).behavior;
    std::ostringstream mix_csv;
    mix_csv << "s,i,qtilde\n";
    int passing = 0;
    for (int k = 0; k < kMixtures; ++k) {
        const double w0 = expo(rng);
        const double w1 = expo(rng);
        const double w2 = expo(rng);
        const double total = w0 + w1 + w2;
        const Behavior p = mix(mix(sc, bell, w1 / (w0 + w1)), pr, w2 / total);
        const auto fp = functional_point(p);
        const bool pass = qtilde_test(p).passed;
        passing += pass;
        mix_csv << format_double(fp.s) << ',' << format_double(fp.i) << ',' << (pass ? 1 : 0) << '\n';
    }
    r.emit("fig5_mixtures.csv", mix_csv.str());
    r.emit("fig5_analytic.csv", analytic_csv({CurveId::QcMax}, 200));

    json s;
    s["quantum_samples"] = n;
    s["max_s"] = s_top;
    s["npa1_failures"] = npa_failures;
    s["zero_marginal_samples"] = near_c;
    s["above_qc_max"] = above_qc;
    s["mixtures"] = kMixtures;
    s["mixtures_passing_qtilde"] = passing;
    return r.finish(s.dump(2));
}

ReproResult fig6(const ReproOptions& o) {
    Recipe r(o);
    const double lo = o.s_lo.value_or(2.5);
    const double hi = o.s_hi.value_or(3.1);
    const int n = r.pick(o.grid, 2000, 5000);
    const auto min = r.scan(SetKind::NS, Mode::Min, lo, hi, n, r.restarts(10));
    r.emit_curve("fig6_ns_min.csv", min);
    const auto profile = concavity_profile(min, o.k);
    std::ostringstream os;
    os << "s,det\n";
    for (const auto& p : profile) os << format_double(p.s) << ',' << format_double(p.det) << '\n';
    r.emit("fig6_profile.csv", os.str());
    const auto estimate = locate_inflection(profile, (hi - lo) / (n - 1), o.k);
    const std::string summary = inflection_to_json(estimate);
    r.emit("fig6_inflection.json", summary + "\n");
    return r.finish(summary);
}

ReproResult fig7(const ReproOptions& o) {
    Recipe r(o);
    const double lo = o.s_lo.value_or(2.5);
    const double hi = o.s_hi.value_or(3.1);
    const int n = r.pick(o.grid, 2000, 5000);
    const auto min = r.scan(SetKind::SYM, Mode::Min, lo, hi, n, r.restarts(10));
    r.emit_curve("fig7_sym_min.csv", min);
    const auto t = trajectory(min);
    std::ostringstream os;
    write_trajectory_csv(os, t);
    r.emit("fig7_trajectory.csv", os.str());
    const std::string summary = kinks_to_json(trajectory_kinks(t));
    r.emit("fig7_kinks.json", summary + "\n");
    return r.finish(summary);
}

}  // namespace

std::vector<std::string> repro_names() { return {"fig3", "fig4", "fig5", "fig6", "fig7"}; }

ReproResult run_repro(const std::string& name, const ReproOptions& options) {
    if (name == "fig3") return fig3(options);
    if (name == "fig4") return fig4(options);
    if (name == "fig5") return fig5(options);
    if (name == "fig6") return fig6(options);
    if (name == "fig7") return fig7(options);
    throw DomainError("unknown recipe '" + name + "' (expected fig3, fig4, fig5, fig6 or fig7)");
}

}  // namespace nonsig
