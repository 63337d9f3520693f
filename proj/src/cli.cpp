#include "nonsig/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "nonsig/analytic_curves.hpp"
#include "nonsig/boundary_scan.hpp"
#include "nonsig/errors.hpp"
#include "nonsig/geometry_analysis.hpp"
#include "nonsig/io.hpp"
#include "nonsig/membership.hpp"
#include "nonsig/quantum_sampler.hpp"
#include "nonsig/repro.hpp"

namespace nonsig {

namespace {

using Clock = std::chrono::steady_clock;

std::string join(const std::vector<std::string>& args) {
    std::string line = "nonsig";
    for (const auto& a : args) line += ' ' + a;
    return line;
}

// Sends text to `path` (with a manifest) or to `out` when no path is given.
void deliver(const std::string& text, const std::string& path, std::ostream& out, const std::string& command,
             std::uint64_t seed, Clock::time_point start) {
    if (path.empty()) {
        out << text;
        return;
    }
    write_text_file(path, text);
    RunManifest m;
    m.command_line = command;
    m.seed = seed;
    m.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    m.add_output(path);
    write_text_file(manifest_path_for(path), m.to_json());
}

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), {}}; }

}  // namespace

int dispatch(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    const auto start = Clock::now();
    const std::string command = join(args);

    CLI::App app{"Mutual information versus CHSH violation for two-party, two-input, two-outcome behaviors"};
    app.name("nonsig");
    app.require_subcommand(1);

    // curve
    auto* curve_cmd = app.add_subcommand("curve", "Sample an analytic boundary curve as CSV s,i");
    std::string curve_id;
    int curve_grid = 200;
    std::string curve_out;
    curve_cmd->add_option("--id", curve_id, "local_max, c_nonlocal_max, ld_pr_max, ns_max, qc_max, bell_pr_min, local_min")
        ->required();
    curve_cmd->add_option("--grid", curve_grid, "Number of points");
    curve_cmd->add_option("--out", curve_out, "Output file (stdout when omitted)");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "Numerical I_min / I_max boundary over a grid of S");
    std::string scan_set = "ns";
    std::string scan_mode = "max";
    std::optional<double> scan_lo;
    std::optional<double> scan_hi;
    ScanConfig scan_cfg;
    bool scan_qtilde = false;
    std::string scan_out;
    scan_cmd->add_option("--set", scan_set, "ns, sym or c");
    scan_cmd->add_option("--mode", scan_mode, "min or max");
    scan_cmd->add_option("--lo", scan_lo, "Lower end of the S range");
    scan_cmd->add_option("--hi", scan_hi, "Upper end of the S range");
    scan_cmd->add_option("--n", scan_cfg.grid_points, "Grid points");
    scan_cmd->add_option("--restarts", scan_cfg.restarts, "Random starts per grid point");
    scan_cmd->add_option("--seed", scan_cfg.seed, "Random seed");
    scan_cmd->add_option("--tol", scan_cfg.tol, "Optimizer accuracy in I");
    scan_cmd->add_option("--warm-sweeps", scan_cfg.warm_sweeps, "Neighbor re-solve passes");
    scan_cmd->add_flag("--qtilde", scan_qtilde, "Restrict to the arcsin relaxation of the quantum set");
    scan_cmd->add_option("--out", scan_out, "Output CSV (stdout when omitted)");

    // sample
    auto* sample_cmd = app.add_subcommand("sample", "Random two-qubit quantum behaviors as CSV");
    std::size_t sample_n = 0;
    std::uint64_t sample_seed = 0;
    std::string sample_out;
    bool sample_full = false;
    sample_cmd->add_option("--n", sample_n, "Number of behaviors")->required();
    sample_cmd->add_option("--seed", sample_seed, "Random seed");
    sample_cmd->add_option("--out", sample_out, "Output CSV (stdout when omitted)");
    sample_cmd->add_flag("--full", sample_full, "Append the eight correlator columns");

    // inflect
    auto* inflect_cmd = app.add_subcommand("inflect", "Locate the concavity change of a scanned curve");
    std::string inflect_in;
    int inflect_k = 100;
    double inflect_zero = 1e-12;
    inflect_cmd->add_option("--in", inflect_in, "Curve CSV")->required();
    inflect_cmd->add_option("--k", inflect_k, "Triple spacing and persistence window");
    inflect_cmd->add_option("--zero-tol", inflect_zero, "Determinants at or below this magnitude carry no sign");

    // trajectory
    auto* traj_cmd = app.add_subcommand("trajectory", "Mean values along a symmetric scan");
    std::string traj_in;
    std::string traj_out;
    std::string traj_kinks;
    int traj_window = 50;
    double traj_factor = 10.0;
    traj_cmd->add_option("--in", traj_in, "Curve CSV of a sym scan")->required();
    traj_cmd->add_option("--out", traj_out, "Output CSV (stdout when omitted)");
    traj_cmd->add_option("--kinks", traj_kinks, "Also write detected slope discontinuities as JSON");
    traj_cmd->add_option("--window", traj_window, "Samples per side of the slope fits");
    traj_cmd->add_option("--factor", traj_factor, "Firing threshold in units of the median slope jump");

    // check
    auto* check_cmd = app.add_subcommand("check", "Membership report for a behavior JSON (stdin by default)");
    std::string check_in;
    double check_tol = kExternalTol;
    check_cmd->add_option("--in", check_in, "Behavior JSON file");
    check_cmd->add_option("--tol", check_tol, "Validation tolerance");

    // repro
    auto* repro_cmd = app.add_subcommand("repro", "Run a figure recipe");
    std::string repro_name;
    ReproOptions ropt;
    std::string repro_dir = "repro";
    std::optional<int> repro_grid;
    std::optional<int> repro_restarts;
    std::optional<double> repro_lo;
    std::optional<double> repro_hi;
    std::optional<std::size_t> repro_samples;
    repro_cmd->add_option("name", repro_name, "fig3, fig4, fig5, fig6 or fig7")->required();
    repro_cmd->add_option("--seed", ropt.seed, "Random seed");
    repro_cmd->add_option("--out-dir", repro_dir, "Directory for the CSV outputs");
    repro_cmd->add_flag("--full-scale", ropt.full_scale, "Use the grid and sample sizes of the original figures");
    repro_cmd->add_option("--grid", repro_grid, "Override the main grid size");
    repro_cmd->add_option("--restarts", repro_restarts, "Override the restarts per grid point");
    repro_cmd->add_option("--lo", repro_lo, "Lower end of the S range (fig6, fig7)");
    repro_cmd->add_option("--hi", repro_hi, "Upper end of the S range (fig6, fig7)");
    repro_cmd->add_option("--samples", repro_samples, "Quantum sample size (fig5)");
    repro_cmd->add_option("--k", ropt.k, "Triple spacing (fig6)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (*curve_cmd) {
            const auto id = parse_curve_id(curve_id);
            if (!id) throw DomainError("unknown curve id '" + curve_id + "'");
            std::ostringstream os;
            os << "s,i\n";
            for (const auto& [s, i] : sample_curve(*id, curve_grid))
                os << format_double(s, 12) << ',' << format_double(i, 12) << '\n';
            deliver(os.str(), curve_out, out, command, 0, start);
        } else if (*scan_cmd) {
            const auto set = parse_set_kind(scan_set);
            if (!set) throw DomainError("unknown set '" + scan_set + "'");
            const auto mode = parse_mode(scan_mode);
            if (!mode) throw DomainError("unknown mode '" + scan_mode + "'");
            scan_cfg.set = *set;
            scan_cfg.mode = *mode;
            scan_cfg.relaxation = scan_qtilde ? Relaxation::QTilde : Relaxation::None;
            const auto [lo, hi] = feasible_s_range(scan_cfg.set, scan_cfg.relaxation);
            scan_cfg.s_lo = scan_lo.value_or(lo);
            scan_cfg.s_hi = scan_hi.value_or(hi);
            scan_cfg.check();
            std::ostringstream os;
            write_curve_csv(os, scan(scan_cfg));
            deliver(os.str(), scan_out, out, command, scan_cfg.seed, start);
        } else if (*sample_cmd) {
            std::ostringstream os;
            write_sample_csv(os, sample(sample_n, sample_seed), sample_full);
            deliver(os.str(), sample_out, out, command, sample_seed, start);
        } else if (*inflect_cmd) {
            const auto curve = read_curve_csv(std::filesystem::path(inflect_in));
            if (curve.points.size() < 2) throw AnalysisError("curve has fewer than 2 points");
            const double ds = (curve.points.back().s - curve.points.front().s) / (curve.points.size() - 1);
            const auto estimate = locate_inflection(concavity_profile(curve, inflect_k), ds, inflect_k, inflect_zero);
            out << inflection_to_json(estimate) << '\n';
        } else if (*traj_cmd) {
            const auto t = trajectory(read_curve_csv(std::filesystem::path(traj_in)));
            std::ostringstream os;
            write_trajectory_csv(os, t);
            deliver(os.str(), traj_out, out, command, 0, start);
            if (!traj_kinks.empty())
                deliver(kinks_to_json(trajectory_kinks(t, traj_window, traj_factor)) + "\n", traj_kinks, out, command,
                        0, start);
        } else if (*check_cmd) {
            std::string text;
            if (check_in.empty()) {
                text = read_all(in);
            } else {
                std::ifstream file(check_in);
                if (!file) throw ParseError("cannot open " + check_in);
                text = read_all(file);
            }
            const Correlators c = correlators_from_json(text);
            const auto table = correlators_to_table(c);
            const auto r = report(table, check_tol);
            out << report_to_json(r) << '\n';
            return r.ns_valid ? kExitOk : kExitValidation;
        } else if (*repro_cmd) {
            ropt.out_dir = repro_dir;
            ropt.grid = repro_grid;
            ropt.restarts = repro_restarts;
            ropt.s_lo = repro_lo;
            ropt.s_hi = repro_hi;
            ropt.samples = repro_samples;
            ropt.command_line = command;
            const auto result = run_repro(repro_name, ropt);
            out << result.summary_json << '\n';
        }
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const AnalysisError& e) {
        err << "analysis error: " << e.what() << '\n';
        return kExitAnalysis;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dispatch(args, std::cin, std::cout, std::cerr);
}

}  // namespace nonsig
