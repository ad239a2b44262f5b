/**
 * @file main.cpp
 * @brief croccosplit command line: run, verify, convergence, mms, scenarios.
 *
 * Exit codes: 0 success (all enabled verifications pass), 2 configuration
 * error, 3 solver failure, 4 verification failure, 5 I/O error.
 */

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "crocco/config.hpp"
#include "crocco/driver.hpp"
#include "crocco/io.hpp"
#include "crocco/studies.hpp"

namespace {

using namespace crocco;

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int workers = -1;
    std::string log_level = "info";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool config_required = true) {
    cmd->add_option("--config", a.config_path, "run configuration file")
        ->required(config_required);
    cmd->add_option("--out", a.out_dir, "output directory (overrides config)");
    cmd->add_option("--workers", a.workers,
                    "worker threads (0 = all, 1 = serial reference)");
    cmd->add_option("--log-level", a.log_level, "quiet | info | debug");
}

ParsedRun load(const CommonArgs& a) {
    ParsedRun parsed = parse_config(a.config_path);
    if (!a.out_dir.empty()) parsed.output.dir = a.out_dir;
    if (a.workers >= 0) parsed.config.workers = a.workers;
    return parsed;
}

void print_report_summary(const RunReport& r, const std::string& log_level) {
    if (log_level == "quiet") return;
    std::printf("scenario %s  mode %s  grid %dx%dx%d  n_split %d  T %g\n",
                r.scenario.c_str(), r.mode.c_str(), r.nx, r.ny, r.nz, r.n_split,
                r.T);
    std::printf("  validation: burgers %.3e  h2 (%.3e, %.3e)  C0 %.6g\n",
                r.validation.burgers, r.validation.h2.momentum,
                r.validation.h2.pressure, r.validation.c0.c0);
    std::printf("  constants: theta0 %.6g  C1 %.6g  M1 %.6g  beta %.6g  "
                "C~0 %.6g\n",
                r.barriers.theta0, r.barriers.C1, r.barriers.M1,
                r.barriers.beta, r.c_tilde0_realized);
    std::printf("  margins: lower %.3e  upper %.3e  %s\n",
                r.slices.empty() ? 0.0 : r.slices.back().lower_margin,
                r.slices.empty() ? 0.0 : r.slices.back().upper_margin,
                r.bounds_pass ? "bounds ok" : "BOUNDS VIOLATED");
    if (r.weak_computed)
        std::printf("  weak residual: family max %.6e (cutoff sensitivity "
                    "%.2e)\n",
                    r.weak.family_max, r.weak.cutoff_sensitivity);
    if (r.bv_growth_finite)
        std::printf("  BV envelope: minimal M %.6g\n", r.bv_growth_M);
    std::printf("  q1/q2 nodes: %ld/%ld  max k-dev %.2e  wall %.2f s\n",
                r.q1_nodes, r.q2_nodes, r.max_k_deviation, r.wall_total_s);
}

int cmd_run(const CommonArgs& a) {
    ParsedRun parsed = load(a);
    RunReport report;
    const Grid grid = build_grid(parsed.scenario.domain, parsed.config.grid);
    SolutionHistory hist = run(parsed.scenario, parsed.config, report);
    write_outputs(parsed, hist, grid, report);
    print_report_summary(report, a.log_level);
    return report.verification_passed() ? 0 : 4;
}

int cmd_verify(const CommonArgs& a) {
    // re-check a saved history: reload slices from the run's output directory
    ParsedRun parsed = load(a);
    const Grid grid = build_grid(parsed.scenario.domain, parsed.config.grid);
    const std::string dir = parsed.output.dir + "/";
    std::vector<Slice> slices = read_slices_csv(dir + "slices.csv", grid);
    const BoundaryClassification cls =
        classify_boundary(parsed.scenario.domain, parsed.scenario.k.v);
    const CoefficientEvaluator ev(parsed.scenario, cls);

    bool ok = true;
    for (const auto& s : slices) {
        const BVFunctionals bv = bv_functionals(s, grid);
        double rlo = 1e300, rhi = 0.0;
        for (int i = 0; i <= grid.nx(); ++i)
            for (int j = 0; j <= grid.ny(); ++j) {
                if (!grid.column_active(i, j)) continue;
                for (int m = 0; m < grid.nz(); ++m) {
                    const double r = s.w[grid.index(i, j, m)] /
                                     (1.0 - grid.zeta(m));
                    rlo = std::min(rlo, r);
                    rhi = std::max(rhi, r);
                }
            }
        if (!(rlo > 0.0)) ok = false;
        if (a.log_level != "quiet")
            std::printf("t %.6f  ratio [%.6g, %.6g]  TV %.6g  V_h %.6g\n", s.t,
                        rlo, rhi, bv.tv_total, bv.v_h);
    }
    const auto family = default_test_family(parsed.scenario.domain, cls,
                                            parsed.config.grid.T,
                                            parsed.config.verify.test_functions);
    const WeakResidualReport weak = weak_residual(slices, grid, ev, family);
    if (a.log_level != "quiet")
        std::printf("weak residual family max %.6e\n", weak.family_max);
    return ok ? 0 : 4;
}

int cmd_convergence(const CommonArgs& a, int levels) {
    ParsedRun parsed = load(a);
    parsed.config.verify.weak_residual = true;
    RefineStudy st = refine_study(parsed.scenario, parsed.config, levels);
    std::printf("n_split   diff_to_2n      weak_max        C~0         M\n");
    for (const auto& row : st.rows)
        std::printf("%7d   %.6e  %.6e  %.6g  %.6g\n", row.n_split,
                    row.diff_to_next, row.weak_max, row.c_tilde0, row.bv_M);
    std::printf("observed splitting order: %.3f\n", st.observed_order);
    return 0;
}

int cmd_mms(const CommonArgs& a) {
    (void)a;
    auto print = [](const char* name, const OrderStudy& st) {
        std::printf("%s\n  resolution      error\n", name);
        for (std::size_t i = 0; i < st.errors.size(); ++i)
            std::printf("  %.6e  %.6e\n", st.resolutions[i], st.errors[i]);
        std::printf("  observed order: %.3f\n", st.observed_order);
    };
    print("porous decay, backward difference",
          porous_decay_temporal_study(PorousParams::Scheme::BackwardEuler, 1.0,
                                      0.7, 1.0, {1, 2, 4, 8}));
    print("porous decay, trapezoid variant",
          porous_decay_temporal_study(PorousParams::Scheme::Trapezoid, 1.0,
                                      0.7, 1.0, {1, 2, 4, 8}));
    print("transport shift, spatial",
          transport_spatial_study({8, 16, 32}, 8, 0.5));
    print("characteristic path, temporal",
          transport_temporal_path_study({1, 2, 4, 8}));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"croccosplit: viscous-splitting solver for the "
                 "Crocco-transformed boundary-layer system"};
    app.require_subcommand(1);

    CommonArgs run_args, verify_args, conv_args, mms_args;
    int conv_levels = 3;

    CLI::App* c_run = app.add_subcommand("run", "run the splitting scheme");
    add_common(c_run, run_args);
    CLI::App* c_verify =
        app.add_subcommand("verify", "re-check a saved history");
    add_common(c_verify, verify_args);
    CLI::App* c_conv =
        app.add_subcommand("convergence", "self-convergence study over n");
    add_common(c_conv, conv_args);
    c_conv->add_option("--levels", conv_levels, "number of doublings");
    CLI::App* c_mms = app.add_subcommand(
        "mms", "manufactured-solution order studies");
    add_common(c_mms, mms_args, /*config_required=*/false);
    CLI::App* c_scen =
        app.add_subcommand("scenarios", "list the registered presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_run->parsed()) return cmd_run(run_args);
        if (c_verify->parsed()) return cmd_verify(verify_args);
        if (c_conv->parsed()) return cmd_convergence(conv_args, conv_levels);
        if (c_mms->parsed()) return cmd_mms(mms_args);
        if (c_scen->parsed()) {
            std::printf("%s", scenario_descriptions().c_str());
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const GeometryError& e) {
        std::fprintf(stderr, "geometry failure: %s\n", e.what());
        return 3;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 5;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
