// Command-line front end: validate | cell | effective | simulate | converge |
// oracle | residual. Exit codes: 0 success, 2 validation failure, 3 solver
// failure, 4 acceptance-check failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "nlhom/oracle.hpp"
#include "nlhom/pipeline.hpp"

using namespace nlhom;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> eps_override;
    double alpha_override = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file")->required();
    cmd->add_option("--out-dir", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--epsilon", opts.eps_override, "epsilon override list (e.g. 1/8 1/16)");
    cmd->add_option("--alpha", opts.alpha_override, "alpha override");
    cmd->add_option("--seed", opts.seed, "RNG seed override")->each([&](const std::string&) {
        opts.seed_set = true;
    });
}

RunConfig resolve(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.config_path);
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
    if (opts.alpha_override > 0.0) cfg.alpha = opts.alpha_override;
    if (opts.seed_set) cfg.seed = opts.seed;
    if (!opts.eps_override.empty()) {
        cfg.eps_q.clear();
        for (const auto& e : opts.eps_override) {
            auto slash = e.find('/');
            if (slash != std::string::npos)
                cfg.eps_q.push_back(std::stoi(e.substr(slash + 1)));
            else {
                double v = std::stod(e);
                cfg.eps_q.push_back(v > 1.0 ? static_cast<int>(v + 0.5)
                                            : static_cast<int>(1.0 / v + 0.5));
            }
        }
    }
    validate_config(cfg);
    return cfg;
}

int cmd_validate(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    auto rep = validate_kernel(cfg.kernel);
    std::printf("kernel %s: mass=%.17g", family_name(cfg.kernel.family).c_str(), rep.mass);
    std::printf(" m1=(");
    for (int i = 0; i < rep.m1.size(); ++i) std::printf("%s%.17g", i ? "," : "", rep.m1(i));
    std::printf(") m2_diag=(");
    for (int i = 0; i < rep.m2.rows(); ++i) std::printf("%s%.17g", i ? "," : "", rep.m2(i, i));
    std::printf(")\n");
    std::printf("mu bounds: mu_minus=%.17g mu_plus=%.17g\n", cfg.mu.mu_minus(), cfg.mu.mu_plus());
    auto sch = corrector_schedule(cfg.alpha);
    std::printf("alpha=%g k=%d exceptional=%s levels=%d\n", cfg.alpha, sch.k,
                sch.exceptional ? "yes" : "no", sch.levels());
    std::printf("config digest %s\n", cfg.digest().c_str());
    if (!rep.ok) {
        for (const auto& v : rep.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
        return 2;
    }
    std::printf("OK\n");
    return 0;
}

int cmd_cell(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    CellPipeline pipe = build_cell_pipeline(cfg);
    ReportInputs in;
    in.cfg = &cfg;
    in.pipe = &pipe;
    emit_report(in);
    export_cell_fields(pipe, cfg.out_dir + "/fields", cfg.digest());
    std::printf("cell stage: %d samples, %d levels, p in [%.6g, %.6g], max residual %.3g\n",
                pipe.ssamples.M, pipe.correctors.schedule.levels(), pipe.correctors.p_min,
                pipe.correctors.p_max,
                *std::max_element(pipe.correctors.max_residual.begin(),
                                  pipe.correctors.max_residual.end()));
    std::printf("wrote %s/report.json and field CSVs\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_effective(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    CellPipeline pipe = build_cell_pipeline(cfg);
    ReportInputs in;
    in.cfg = &cfg;
    in.pipe = &pipe;
    emit_report(in);
    std::printf("Theta_sym =");
    for (int r = 0; r < pipe.tensors.Theta_sym.rows(); ++r)
        for (int c = 0; c < pipe.tensors.Theta_sym.cols(); ++c)
            std::printf(" %.17g", pipe.tensors.Theta_sym(r, c));
    std::printf("\nb0 =");
    for (int c = 0; c < pipe.drift.b.cols(); ++c) std::printf(" %.17g", pipe.drift.b(0, c));
    std::printf("\nlambda band [%.6g, %.6g], B0 max %.6g\n", pipe.tensors.lambda_min,
                pipe.tensors.lambda_max, pipe.drift.B0_max_abs());
    return 0;
}

int cmd_simulate(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    if (cfg.eps_q.empty()) throw ConfigError("no epsilon to simulate");
    CellPipeline pipe = build_cell_pipeline(cfg);
    for (int q : cfg.eps_q) {
        BoxGrid box(cfg.box_length, q, cfg.n_cell);
        BoxOperator op(box, pipe.dk, cfg.mu, cfg.alpha);
        auto u0 = initial_field(cfg, box);
        EvolutionState st =
            evolve_epsilon(u0, cfg.T, op, cfg.checkpoints, cfg.cfl_fraction, cfg.dt_scale);
        export_snapshots(cfg, box, st, cfg.out_dir + "/snapshots", "q" + std::to_string(q));
        std::printf("q=%d: %ld steps, dt<=%.3g, sup nonincreasing: %s, min %.3g\n", q, st.steps,
                    st.dt_max, st.sup_nonincreasing() ? "yes" : "NO", st.min_over_run());
        if (!st.sup_nonincreasing()) return 3;
    }
    return 0;
}

int cmd_converge(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    CellPipeline pipe = build_cell_pipeline(cfg);
    ConvergenceTable table = run_convergence(cfg, pipe);
    ReportInputs in;
    in.cfg = &cfg;
    in.pipe = &pipe;
    in.table = &table;
    emit_report(in);

    std::printf("eps        E_full        E_partial     runtime\n");
    for (const auto& r : table.rows)
        std::printf("1/%-6d %.6e  %.6e  %.2fs\n", r.q, r.e_full, r.e_partial, r.runtime_sec);
    bool ok = table.strictly_decreasing_full() && table.strictly_decreasing_partial();
    std::printf("monotone decay: %s\n", ok ? "yes" : "NO");
    return ok ? 0 : 4;
}

int cmd_oracle(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    CellPipeline pipe = build_cell_pipeline(cfg);
    double dev = oracle_deviation(cfg, pipe);
    std::printf("production vs dense oracle: max deviation %.3e (tolerance 1e-08)\n", dev);
    return dev <= 1e-8 ? 0 : 4;
}

int cmd_residual(const CommonOpts& opts) {
    RunConfig cfg = resolve(opts);
    CellPipeline pipe = build_cell_pipeline(cfg);
    std::vector<std::pair<int, double>> residuals;
    std::vector<int> qs = cfg.eps_q;
    std::sort(qs.begin(), qs.end());
    for (int q : qs) {
        double r = ansatz_residual(cfg, pipe, q);
        residuals.emplace_back(q, r);
        std::printf("eps=1/%-6d ansatz residual %.6e\n", q, r);
    }
    ReportInputs in;
    in.cfg = &cfg;
    in.pipe = &pipe;
    in.residuals = &residuals;
    emit_report(in);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homogenization engine for nonlocal convolution-type parabolic problems"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto* validate = app.add_subcommand("validate", "check config, kernel and coefficient bounds");
    auto* cell = app.add_subcommand("cell", "cell stage: densities, correctors, fields");
    auto* effective = app.add_subcommand("effective", "drift decomposition and effective tensors");
    auto* simulate = app.add_subcommand("simulate", "evolve the eps-problem and export snapshots");
    auto* converge = app.add_subcommand("converge", "moving-frame convergence sweep");
    auto* oracle = app.add_subcommand("oracle", "compare production path against the dense oracle");
    auto* residual = app.add_subcommand("residual", "ansatz residual sweep");
    for (auto* c : {validate, cell, effective, simulate, converge, oracle, residual})
        add_common(c, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(opts);
        if (cell->parsed()) return cmd_cell(opts);
        if (effective->parsed()) return cmd_effective(opts);
        if (simulate->parsed()) return cmd_simulate(opts);
        if (converge->parsed()) return cmd_converge(opts);
        if (oracle->parsed()) return cmd_oracle(opts);
        if (residual->parsed()) return cmd_residual(opts);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 1;
}
