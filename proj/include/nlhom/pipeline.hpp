#pragma once

#include <string>
#include <vector>

#include "nlhom/config.hpp"
#include "nlhom/effective.hpp"
#include "nlhom/simulate.hpp"

namespace nlhom {

/// Everything the cell stage produces for one (config, alpha).
struct CellPipeline {
    TorusGrid grid;
    SSampleSet ssamples;
    DiscreteKernel dk;
    CorrectorSet correctors;
    DriftDecomposition drift;
    EffectiveTensors tensors;
};

CellPipeline build_cell_pipeline(const RunConfig& cfg);

std::vector<double> initial_field(const RunConfig& cfg, const BoxGrid& box);

struct ConvergenceRow {
    int q = 0;
    double eps = 0.0;
    double e_full = 0.0;
    double e_partial = 0.0;
    double e_full_rel = 0.0;
    double e_partial_rel = 0.0;
    double runtime_sec = 0.0;
    bool sup_nonincreasing = true;
    double min_value = 0.0;  // over all steps (positivity witness for u0 >= 0)
};

struct ConvergenceTable {
    std::string digest;
    double alpha = 0.0;
    Eigen::MatrixXd Theta;  // effective matrix used for the u0 comparison
    Eigen::MatrixXd b;      // drift vectors, row j = b_j
    std::vector<ConvergenceRow> rows;  // sorted by decreasing eps

    bool strictly_decreasing_full() const;
    bool strictly_decreasing_partial() const;
};

/// Full sweep: correctors and frame once, then per-eps evolve / shift / compare
/// against u0-with-Theta (E_full) and rho-eps-with-theta(s) (E_partial).
ConvergenceTable run_convergence(const RunConfig& cfg, const CellPipeline& pipe);
ConvergenceTable run_convergence(const RunConfig& cfg);

/// Discrepancy of the corrector ansatz against the intermediate effective
/// equation, sup over the config checkpoints of the grid L2 norm.
double ansatz_residual(const RunConfig& cfg, const CellPipeline& pipe, int q);

/// Keystone consistency: largest deviation between folded simulation stencil
/// rows and assembled cell rows, over `rows` random (node, sample) draws.
double keystone_deviation(const RunConfig& cfg, const CellPipeline& pipe, int q, int rows,
                          std::uint64_t seed);

/// Production-vs-oracle agreement: largest deviation across p, chi1, F1(s),
/// theta(s) and Theta.
double oracle_deviation(const RunConfig& cfg, const CellPipeline& pipe);

struct ReportInputs {
    const RunConfig* cfg = nullptr;
    const CellPipeline* pipe = nullptr;
    const ConvergenceTable* table = nullptr;              // optional
    const std::vector<std::pair<int, double>>* residuals = nullptr;  // optional (q, residual)
};

/// Writes report.json plus CSV tables (F_j(s), beta0, B0, theta samples,
/// convergence) under cfg.out_dir. Deterministic field order, 17 significant
/// digits in the CSVs; returns the list of files written.
std::vector<std::string> emit_report(const ReportInputs& in);

/// CSV / flat-binary exports used by the cell and simulate subcommands.
void export_cell_fields(const CellPipeline& pipe, const std::string& dir,
                        const std::string& digest);
void export_snapshots(const RunConfig& cfg, const BoxGrid& box, const EvolutionState& st,
                      const std::string& dir, const std::string& tag);

}  // namespace nlhom
