#pragma once

#include <vector>

#include "nlhom/config.hpp"

namespace nlhom {

/// Reference values computed by a self-contained dense path: plain-summation
/// quadratures, direct lattice folds and a hand-rolled pivoted elimination.
/// Shares problem data with the production modules but none of their solver
/// or assembly code.
struct OracleResult {
    int d = 1;
    long n = 0;
    int M = 0;
    std::vector<std::vector<double>> p;      // [m][i]
    std::vector<std::vector<double>> chi1;   // [m][c * n + i]
    std::vector<std::vector<double>> F1;     // [m][c]
    std::vector<std::vector<double>> theta;  // [m][r * d + c]
    std::vector<double> Theta;               // [r * d + c]
};

/// pre: n_cell^d <= 1024 (dense elimination).
OracleResult dense_oracle(const RunConfig& cfg);

}  // namespace nlhom
