#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nlhom/coefficient.hpp"
#include "nlhom/kernel.hpp"

namespace nlhom {

struct InitialCondition {
    std::string type = "gaussian";  // gaussian | harmonic
    double width = 1.0;             // gaussian: exp(-(x/width)^2)
    int mode = 1;                   // harmonic: amplitude * cos(2 pi mode x / L)
    double amplitude = 1.0;
};

/// One run of the harness: problem data, discretization, sweep and output
/// choices. Mirrors the JSON config sections.
struct RunConfig {
    KernelSpec kernel;
    CoefficientSpec mu;
    double alpha = 1.0;

    int n_cell = 64;    // cell-torus resolution (per dimension)
    int s_samples = 32; // M

    int box_length = 8;
    std::vector<int> eps_q;  // eps = 1/q entries, descending eps order
    InitialCondition initial;

    double T = 1.0;
    std::vector<double> checkpoints;
    double cfl_fraction = 0.9;
    double dt_scale = 1.0;

    double tol_compat = 1e-10;
    double tol_solve = 1e-10;

    std::string out_dir = "out";
    bool binary_snapshots = false;
    std::uint64_t seed = 12345;

    nlohmann::json to_json() const;
    std::string digest() const;  // FNV-1a over the canonical dump
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Cross-field invariants: coercivity, sample counts, eps = 1/q, checkpoint
/// placement. Throws ConfigError / CoercivityViolation on violation.
void validate_config(const RunConfig& cfg);

}  // namespace nlhom
