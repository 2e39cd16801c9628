#include "nlhom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "nlhom/fourier.hpp"
#include "nlhom/oracle.hpp"

namespace nlhom {

using nlohmann::ordered_json;

CellPipeline build_cell_pipeline(const RunConfig& cfg) {
    validate_config(cfg);
    CellPipeline pipe;
    pipe.grid = TorusGrid(cfg.kernel.dimension, cfg.n_cell);
    pipe.ssamples = SSampleSet(cfg.s_samples);
    pipe.dk = discretize_kernel(cfg.kernel, cfg.n_cell);

    CellTolerances tol{cfg.tol_compat, cfg.tol_solve};
    CorrectorSchedule schedule = corrector_schedule(cfg.alpha);
    pipe.correctors =
        build_corrector_chain(schedule, pipe.grid, cfg.kernel, cfg.mu, pipe.ssamples, tol);
    pipe.drift = drift_decomposition(pipe.correctors);
    pipe.tensors = average_theta(pipe.correctors.theta);
    return pipe;
}

std::vector<double> initial_field(const RunConfig& cfg, const BoxGrid& box) {
    std::vector<double> u(static_cast<size_t>(box.n_box()));
    if (cfg.initial.type == "gaussian") {
        double w2 = cfg.initial.width * cfg.initial.width;
        for (long i = 0; i < box.n_box(); ++i) {
            double x = box.x(i);
            u[static_cast<size_t>(i)] = cfg.initial.amplitude * std::exp(-x * x / w2);
        }
    } else {
        for (long i = 0; i < box.n_box(); ++i) {
            double x = box.x(i);
            u[static_cast<size_t>(i)] =
                cfg.initial.amplitude * std::cos(2.0 * M_PI * cfg.initial.mode * x / box.length);
        }
    }
    return u;
}

bool ConvergenceTable::strictly_decreasing_full() const {
    for (size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].e_full < rows[i - 1].e_full)) return false;
    return true;
}

bool ConvergenceTable::strictly_decreasing_partial() const {
    for (size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].e_partial < rows[i - 1].e_partial)) return false;
    return true;
}

namespace {

/// Cumulative diffusion of the rho-eps problem: integral over (0,t) of
/// theta_sym(s/eps^alpha), evaluated exactly on the trig interpolant.
struct ThetaCumulative {
    TrigInterp interp;  // theta_sym (0,0) component samples, d = 1
    double eps_alpha;

    double operator()(double t) const {
        double S = t / eps_alpha;
        // antiderivative is exact but evaluate in reduced coordinates to keep
        // the trig arguments small at large S
        double whole = std::floor(S);
        double per_period = interp.antiderivative(1.0);
        return eps_alpha * (whole * per_period + interp.antiderivative(S - whole));
    }
};

EvolutionState shifted_trajectory(const EvolutionState& traj, const DriftDecomposition& drift,
                                  double eps, double box_length) {
    EvolutionState out;
    out.times = traj.times;
    for (size_t c = 0; c < traj.times.size(); ++c) {
        Eigen::VectorXd b = drift.frame(eps, traj.times[c]);
        // remove the frame: evaluate u at x + b^eps(t)
        out.snapshots.push_back(shift_field(traj.snapshots[c], -b(0), box_length));
    }
    return out;
}

}  // namespace

ConvergenceTable run_convergence(const RunConfig& cfg, const CellPipeline& pipe) {
    if (cfg.kernel.dimension != 1)
        throw ConfigError("the convergence harness targets d = 1");
    if (cfg.eps_q.empty()) throw ConfigError("config carries no epsilon entries");

    ConvergenceTable table;
    table.digest = cfg.digest();
    table.alpha = cfg.alpha;
    table.Theta = pipe.tensors.Theta;
    table.b = pipe.drift.b;

    const double theta_mean = pipe.tensors.Theta_sym(0, 0);
    TrigInterp theta_interp = [&] {
        Eigen::VectorXd samples(pipe.ssamples.M);
        for (int m = 0; m < pipe.ssamples.M; ++m) samples(m) = pipe.tensors.theta_sym(m)(0, 0);
        return TrigInterp(samples);
    }();

    std::vector<int> qs = cfg.eps_q;
    std::sort(qs.begin(), qs.end());  // ascending q = descending eps

    for (int q : qs) {
        auto t0 = std::chrono::steady_clock::now();
        BoxGrid box(cfg.box_length, q, cfg.n_cell);
        BoxOperator op(box, pipe.dk, cfg.mu, cfg.alpha);
        std::vector<double> u0 = initial_field(cfg, box);

        EvolutionState u_eps =
            evolve_epsilon(u0, cfg.T, op, cfg.checkpoints, cfg.cfl_fraction, cfg.dt_scale);
        EvolutionState in_frame = shifted_trajectory(u_eps, pipe.drift, box.eps(), box.length);

        EvolutionState u_hom = solve_heat_multiplier(
            u0, [&](double t) { return theta_mean * t; }, box, cfg.checkpoints);
        ThetaCumulative cumulative{theta_interp, std::pow(box.eps(), cfg.alpha)};
        EvolutionState rho_eps = solve_heat_multiplier(u0, cumulative, box, cfg.checkpoints);

        ConvergenceRow row;
        row.q = q;
        row.eps = box.eps();
        row.e_full = sup_l2_error(in_frame, u_hom, box.h());
        row.e_partial = sup_l2_error(in_frame, rho_eps, box.h());
        row.e_full_rel = sup_l2_error(in_frame, u_hom, box.h(), true);
        row.e_partial_rel = sup_l2_error(in_frame, rho_eps, box.h(), true);
        row.sup_nonincreasing = u_eps.sup_nonincreasing();
        row.min_value = u_eps.min_over_run();
        row.runtime_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        table.rows.push_back(row);
    }
    return table;
}

ConvergenceTable run_convergence(const RunConfig& cfg) {
    return run_convergence(cfg, build_cell_pipeline(cfg));
}

namespace {

/// Per-node trig interpolants across the s-samples of a corrector level.
std::vector<TrigInterp> field_interpolants(const std::vector<CellField>& samples, int comp) {
    const long n = samples.front().n();
    const int M = static_cast<int>(samples.size());
    std::vector<TrigInterp> out;
    out.reserve(static_cast<size_t>(n));
    Eigen::VectorXd column(M);
    for (long i = 0; i < n; ++i) {
        for (int m = 0; m < M; ++m) column(m) = samples[static_cast<size_t>(m)].v(i, comp);
        out.emplace_back(column);
    }
    return out;
}

std::vector<double> spectral_heat_field(const std::vector<std::complex<double>>& spec0,
                                        double box_length, int n, double D, int x_order) {
    auto spec = spec0;
    for (size_t k = 0; k < spec.size(); ++k) {
        double kappa = static_cast<double>(k) / box_length;
        std::complex<double> deriv(0.0, 2.0 * M_PI * kappa);
        spec[k] *= std::exp(-4.0 * M_PI * M_PI * kappa * kappa * D) * std::pow(deriv, x_order);
    }
    if (n % 2 == 0 && x_order % 2 == 1) spec.back() = 0.0;  // odd derivative kills Nyquist
    return dft_inverse(spec, n);
}

}  // namespace

double ansatz_residual(const RunConfig& cfg, const CellPipeline& pipe, int q) {
    if (cfg.kernel.dimension != 1) throw ConfigError("ansatz residual targets d = 1");

    BoxGrid box(cfg.box_length, q, cfg.n_cell);
    BoxOperator op(box, pipe.dk, cfg.mu, cfg.alpha);
    const double eps = box.eps();
    const double eps_alpha = std::pow(eps, cfg.alpha);
    const long n = box.n_box();
    const double Theta = pipe.tensors.Theta_sym(0, 0);
    const int levels = pipe.correctors.schedule.levels();

    std::vector<double> u0 = initial_field(cfg, box);
    auto spec0 = dft_forward(u0);

    // s-interpolants of every corrector level and of kappa / theta
    std::vector<std::vector<TrigInterp>> chi_interp;
    for (int lev = 0; lev < levels; ++lev)
        chi_interp.push_back(field_interpolants(pipe.correctors.chi[static_cast<size_t>(lev)], 0));
    std::vector<TrigInterp> kappa_interp = field_interpolants(pipe.correctors.kappa, 0);
    TrigInterp theta_interp = [&] {
        Eigen::VectorXd samples(pipe.ssamples.M);
        for (int m = 0; m < pipe.ssamples.M; ++m)
            samples(m) = pipe.correctors.theta[static_cast<size_t>(m)](0, 0);
        return TrigInterp(samples);
    }();

    auto eval_level = [&](const std::vector<TrigInterp>& interp, double sfrac,
                          std::vector<double>& out) {
        out.resize(static_cast<size_t>(box.n_cell));
        for (int ic = 0; ic < box.n_cell; ++ic)
            out[static_cast<size_t>(ic)] = interp[static_cast<size_t>(ic)].eval(sfrac);
    };

    // w^eps(x, t) assembled from the spectral heat solution and the correctors
    auto assemble_w = [&](double t, std::vector<double>& w) {
        double b = pipe.drift.frame(eps, t)(0);
        double s = t / eps_alpha;
        double sfrac = s - std::floor(s);

        std::vector<double> u = spectral_heat_field(spec0, box.length, static_cast<int>(n),
                                                    Theta * t, 0);
        std::vector<double> ux = spectral_heat_field(spec0, box.length, static_cast<int>(n),
                                                     Theta * t, 1);
        std::vector<double> uxx = spectral_heat_field(spec0, box.length, static_cast<int>(n),
                                                      Theta * t, 2);
        u = shift_field(u, b, box.length);
        ux = shift_field(ux, b, box.length);
        uxx = shift_field(uxx, b, box.length);

        std::vector<double> chi_tot(static_cast<size_t>(box.n_cell), 0.0);
        std::vector<double> level(static_cast<size_t>(box.n_cell));
        for (int lev = 0; lev < levels; ++lev) {
            eval_level(chi_interp[static_cast<size_t>(lev)], sfrac, level);
            double scale = std::pow(eps, pipe.correctors.schedule.gamma[static_cast<size_t>(lev)]);
            for (int ic = 0; ic < box.n_cell; ++ic)
                chi_tot[static_cast<size_t>(ic)] += scale * level[static_cast<size_t>(ic)];
        }
        std::vector<double> kap(static_cast<size_t>(box.n_cell));
        eval_level(kappa_interp, sfrac, kap);

        w.resize(static_cast<size_t>(n));
        for (long i = 0; i < n; ++i) {
            int ic = box.cell_index(i);
            w[static_cast<size_t>(i)] =
                u[static_cast<size_t>(i)] + chi_tot[static_cast<size_t>(ic)] * ux[static_cast<size_t>(i)] +
                eps * eps * kap[static_cast<size_t>(ic)] * uxx[static_cast<size_t>(i)];
        }
    };

    // sup over a dense, eps-independent time set. A uniform grid can resonate
    // with the frozen-time stride T/eps^alpha (every sampled phase integer),
    // so low-discrepancy golden-ratio times are used instead.
    const int n_eval = 32;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    std::vector<double> eval_times;
    for (int j = 1; j <= n_eval; ++j) {
        double fr = j * golden - std::floor(j * golden);
        eval_times.push_back(cfg.T * (0.05 + 0.95 * fr));
    }
    std::sort(eval_times.begin(), eval_times.end());

    const double delta = 1e-6;
    double worst = 0.0;
    std::vector<double> wm, wp, wc, Lw;
    for (double t : eval_times) {
        assemble_w(t - delta, wm);
        assemble_w(t + delta, wp);
        assemble_w(t, wc);
        op.apply(wc, t, Lw);

        double s = t / eps_alpha;
        double sfrac = s - std::floor(s);
        double theta_s = theta_interp.eval(sfrac);
        double b = pipe.drift.frame(eps, t)(0);
        std::vector<double> uxx = spectral_heat_field(spec0, box.length, static_cast<int>(n),
                                                      Theta * t, 2);
        uxx = shift_field(uxx, b, box.length);

        double acc = 0.0;
        for (long i = 0; i < n; ++i) {
            double dw = (wp[static_cast<size_t>(i)] - wm[static_cast<size_t>(i)]) / (2.0 * delta);
            // u solves du/dt = Theta uxx, so the intermediate-equation bracket
            // is (Theta - theta(s)) uxx evaluated in the moving frame
            double bracket = (Theta - theta_s) * uxx[static_cast<size_t>(i)];
            double r = dw - Lw[static_cast<size_t>(i)] - bracket;
            acc += r * r;
        }
        worst = std::max(worst, std::sqrt(acc * box.h()));
    }
    return worst;
}

double keystone_deviation(const RunConfig& cfg, const CellPipeline& pipe, int q, int rows,
                          std::uint64_t seed) {
    BoxGrid box(cfg.box_length, q, cfg.n_cell);
    BoxOperator op(box, pipe.dk, cfg.mu, cfg.alpha);

    PeriodizedKernel ahat0 = periodize(pipe.dk, 0);
    CoefficientTables tables(cfg.mu, pipe.grid);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> node(0, box.n_box() - 1);
    std::uniform_int_distribution<int> sample(0, pipe.ssamples.M - 1);

    double worst = 0.0;
    int last_m = -1;
    CellOperator A;
    for (int r = 0; r < rows; ++r) {
        long i = node(rng);
        int m = sample(rng);
        if (m != last_m) {
            A = assemble_generator(pipe.grid, ahat0, tables, pipe.ssamples.s(m), false);
            last_m = m;
        }
        Eigen::VectorXd folded = op.fold_row(i, pipe.ssamples.s(m));
        Eigen::VectorXd cell_row = A.A.row(box.cell_index(i)).transpose();
        worst = std::max(worst, (folded - cell_row).cwiseAbs().maxCoeff());
    }
    return worst;
}

double oracle_deviation(const RunConfig& cfg, const CellPipeline& pipe) {
    OracleResult oracle = dense_oracle(cfg);
    const long n = pipe.grid.n();
    const int d = pipe.grid.d;

    double worst = 0.0;
    for (int m = 0; m < oracle.M; ++m) {
        const auto& p = pipe.correctors.p[static_cast<size_t>(m)];
        const auto& chi1 = pipe.correctors.chi[0][static_cast<size_t>(m)];
        for (long i = 0; i < n; ++i)
            worst = std::max(worst,
                             std::abs(p.v(i, 0) - oracle.p[static_cast<size_t>(m)][static_cast<size_t>(i)]));
        for (int c = 0; c < d; ++c)
            for (long i = 0; i < n; ++i)
                worst = std::max(
                    worst,
                    std::abs(chi1.v(i, c) -
                             oracle.chi1[static_cast<size_t>(m)][static_cast<size_t>(c) * n +
                                                                 static_cast<size_t>(i)]));
        for (int c = 0; c < d; ++c)
            worst = std::max(worst, std::abs(pipe.correctors.F[0](m, c) -
                                             oracle.F1[static_cast<size_t>(m)][static_cast<size_t>(c)]));
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                worst = std::max(
                    worst, std::abs(pipe.correctors.theta[static_cast<size_t>(m)](r, c) -
                                    oracle.theta[static_cast<size_t>(m)][static_cast<size_t>(r) * d + c]));
    }
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            worst = std::max(worst, std::abs(pipe.tensors.Theta(r, c) -
                                             oracle.Theta[static_cast<size_t>(r) * d + c]));
    return worst;
}

// ---------------------------------------------------------------------------
// reporting

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write '" + path + "'");
    out << body;
    if (!out) throw IoFailure("failed writing '" + path + "'");
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (int r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<std::string> emit_report(const ReportInputs& in) {
    const RunConfig& cfg = *in.cfg;
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<std::string> written;

    ordered_json rep;
    rep["timestamp"] = static_cast<long long>(std::time(nullptr));
    rep["config_digest"] = cfg.digest();
    rep["config"] = cfg.to_json();

    if (in.pipe) {
        const CellPipeline& pipe = *in.pipe;
        const auto& sch = pipe.correctors.schedule;
        rep["schedule"] = {{"alpha", sch.alpha},
                           {"k", sch.k},
                           {"gamma", sch.gamma},
                           {"exceptional", sch.exceptional}};
        rep["drift"] = {{"b", matrix_json(pipe.drift.b)},
                        {"B0_max_abs", pipe.drift.B0_max_abs()}};
        rep["effective"] = {{"Theta", matrix_json(pipe.tensors.Theta)},
                            {"Theta_sym", matrix_json(pipe.tensors.Theta_sym)},
                            {"lambda_min", pipe.tensors.lambda_min},
                            {"lambda_max", pipe.tensors.lambda_max}};
        rep["cell_diagnostics"] = {{"p_min", pipe.correctors.p_min},
                                   {"p_max", pipe.correctors.p_max},
                                   {"max_p_residual", pipe.correctors.max_p_residual},
                                   {"max_defect", pipe.correctors.max_defect},
                                   {"max_residual", pipe.correctors.max_residual},
                                   {"max_mean_abs", pipe.correctors.max_mean_abs}};
    }
    if (in.table) {
        ordered_json rows = ordered_json::array();
        for (const auto& r : in.table->rows)
            rows.push_back({{"q", r.q},
                            {"eps", r.eps},
                            {"E_full", r.e_full},
                            {"E_partial", r.e_partial},
                            {"E_full_rel", r.e_full_rel},
                            {"E_partial_rel", r.e_partial_rel},
                            {"runtime_sec", r.runtime_sec},
                            {"sup_nonincreasing", r.sup_nonincreasing},
                            {"min_value", r.min_value}});
        rep["convergence"] = rows;
    }
    if (in.residuals) {
        ordered_json rows = ordered_json::array();
        for (const auto& [q, res] : *in.residuals)
            rows.push_back({{"q", q}, {"residual", res}});
        rep["ansatz_residuals"] = rows;
    }

    std::string report_path = cfg.out_dir + "/report.json";
    write_text(report_path, rep.dump(2) + "\n");
    written.push_back(report_path);

    const std::string digest_line = "# config " + cfg.digest() + "\n";
    if (in.pipe) {
        const CellPipeline& pipe = *in.pipe;
        const int M = pipe.ssamples.M;
        const int d = pipe.grid.d;
        const int levels = pipe.correctors.schedule.levels();

        std::string body = digest_line + "s";
        for (int lev = 0; lev < levels; ++lev)
            for (int c = 0; c < d; ++c)
                body += ",F" + std::to_string(lev + 1) + "_" + std::to_string(c);
        body += "\n";
        for (int m = 0; m < M; ++m) {
            body += fmt17(pipe.ssamples.s(m));
            for (int lev = 0; lev < levels; ++lev)
                for (int c = 0; c < d; ++c)
                    body += "," + fmt17(pipe.correctors.F[static_cast<size_t>(lev)](m, c));
            body += "\n";
        }
        write_text(cfg.out_dir + "/F_samples.csv", body);
        written.push_back(cfg.out_dir + "/F_samples.csv");

        body = digest_line + "s";
        for (int c = 0; c < d; ++c) body += ",beta0_" + std::to_string(c);
        for (int c = 0; c < d; ++c) body += ",B0_" + std::to_string(c);
        body += "\n";
        for (int m = 0; m < M; ++m) {
            body += fmt17(pipe.ssamples.s(m));
            for (int c = 0; c < d; ++c) body += "," + fmt17(pipe.drift.beta0(m, c));
            for (int c = 0; c < d; ++c) body += "," + fmt17(pipe.drift.B0(m, c));
            body += "\n";
        }
        write_text(cfg.out_dir + "/frame.csv", body);
        written.push_back(cfg.out_dir + "/frame.csv");

        body = digest_line + "s";
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                body += ",theta_" + std::to_string(r) + std::to_string(c);
        body += "\n";
        for (int m = 0; m < M; ++m) {
            body += fmt17(pipe.ssamples.s(m));
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    body += "," + fmt17(pipe.correctors.theta[static_cast<size_t>(m)](r, c));
            body += "\n";
        }
        write_text(cfg.out_dir + "/theta_samples.csv", body);
        written.push_back(cfg.out_dir + "/theta_samples.csv");
    }

    if (in.table) {
        std::string body = digest_line + "eps,q,E_full,E_partial,E_full_rel,E_partial_rel,runtime_sec\n";
        for (const auto& r : in.table->rows)
            body += fmt17(r.eps) + "," + std::to_string(r.q) + "," + fmt17(r.e_full) + "," +
                    fmt17(r.e_partial) + "," + fmt17(r.e_full_rel) + "," +
                    fmt17(r.e_partial_rel) + "," + fmt17(r.runtime_sec) + "\n";
        write_text(cfg.out_dir + "/convergence.csv", body);
        written.push_back(cfg.out_dir + "/convergence.csv");
    }
    return written;
}

void export_cell_fields(const CellPipeline& pipe, const std::string& dir,
                        const std::string& digest) {
    std::filesystem::create_directories(dir);
    const TorusGrid& g = pipe.grid;
    const int levels = pipe.correctors.schedule.levels();

    auto field_csv = [&](const CellField& f, const std::string& path) {
        std::string body = "# config " + digest + "\n";
        body += g.d == 1 ? "xi" : "xi0,xi1";
        for (int c = 0; c < f.ncomp(); ++c) body += ",c" + std::to_string(c);
        body += "\n";
        for (long i = 0; i < g.n(); ++i) {
            auto ax = g.axes(i);
            body += fmt17(g.coord(ax[0]));
            if (g.d == 2) body += "," + fmt17(g.coord(ax[1]));
            for (int c = 0; c < f.ncomp(); ++c) body += "," + fmt17(f.v(i, c));
            body += "\n";
        }
        write_text(path, body);
    };

    for (int m = 0; m < pipe.ssamples.M; ++m) {
        std::string tag = "_m" + std::to_string(m) + ".csv";
        field_csv(pipe.correctors.p[static_cast<size_t>(m)], dir + "/p" + tag);
        for (int lev = 0; lev < levels; ++lev)
            field_csv(pipe.correctors.chi[static_cast<size_t>(lev)][static_cast<size_t>(m)],
                      dir + "/chi" + std::to_string(lev + 1) + tag);
        field_csv(pipe.correctors.kappa[static_cast<size_t>(m)], dir + "/kappa" + tag);
    }
}

void export_snapshots(const RunConfig& cfg, const BoxGrid& box, const EvolutionState& st,
                      const std::string& dir, const std::string& tag) {
    std::filesystem::create_directories(dir);
    for (size_t c = 0; c < st.times.size(); ++c) {
        std::string base = dir + "/" + tag + "_t" + std::to_string(c);
        const auto& snap = st.snapshots[c];
        const std::string digest = cfg.digest();
        if (cfg.binary_snapshots) {
            std::ofstream bin(base + ".f64", std::ios::binary);
            if (!bin) throw IoFailure("cannot write '" + base + ".f64'");
            bin.write(reinterpret_cast<const char*>(snap.data()),
                      static_cast<std::streamsize>(snap.size() * sizeof(double)));
            ordered_json side = {{"config_digest", digest},
                                 {"time", st.times[c]},
                                 {"n_box", box.n_box()},
                                 {"box_length", box.length},
                                 {"q", box.q},
                                 {"n_cell", box.n_cell},
                                 {"h", box.h()},
                                 {"layout", "float64 little-endian, x ascending from -L/2"}};
            write_text(base + ".json", side.dump(2) + "\n");
        } else {
            std::string body = "# config " + digest + "\nx,u\n";
            for (long i = 0; i < box.n_box(); ++i)
                body += fmt17(box.x(i)) + "," + fmt17(snap[static_cast<size_t>(i)]) + "\n";
            write_text(base + ".csv", body);
        }
    }
}

}  // namespace nlhom
