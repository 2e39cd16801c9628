#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>

#include "nlhom/errors.hpp"

namespace nlhom {

/// Uniform grid on the unit torus T^d, d in {1,2}. Nodes xi_i = i/N per axis,
/// quadrature weight N^{-d} per node (exact for periodic trapezoid sums).
struct TorusGrid {
    int d = 1;
    int N = 64;

    TorusGrid() = default;
    TorusGrid(int d_, int N_) : d(d_), N(N_) {
        if (d < 1 || d > 2) throw ConfigError("torus dimension must be 1 or 2");
        if (N < 4) throw ConfigError("torus resolution must be >= 4");
    }

    long n() const { return d == 1 ? N : static_cast<long>(N) * N; }
    double weight() const { return d == 1 ? 1.0 / N : 1.0 / (static_cast<double>(N) * N); }

    /// Decompose flat node index into per-axis indices (row-major, axis 0 major).
    std::array<int, 2> axes(long i) const {
        if (d == 1) return {static_cast<int>(i), 0};
        return {static_cast<int>(i / N), static_cast<int>(i % N)};
    }
    long flat(int i0, int i1 = 0) const { return d == 1 ? i0 : static_cast<long>(i0) * N + i1; }

    /// Node coordinate along one axis.
    double coord(int idx) const { return static_cast<double>(idx) / N; }

    /// Flat index of the componentwise difference (i - j) mod N.
    long diff(long i, long j) const {
        if (d == 1) {
            int r = static_cast<int>(i - j) % N;
            return r < 0 ? r + N : r;
        }
        auto a = axes(i), b = axes(j);
        int r0 = (a[0] - b[0]) % N;
        if (r0 < 0) r0 += N;
        int r1 = (a[1] - b[1]) % N;
        if (r1 < 0) r1 += N;
        return flat(r0, r1);
    }

    bool operator==(const TorusGrid& o) const { return d == o.d && N == o.N; }
};

/// M uniform samples s_m = m/M of the slow-time period [0,1).
struct SSampleSet {
    int M = 16;

    SSampleSet() = default;
    explicit SSampleSet(int M_) : M(M_) {
        if (M < 8 || M % 2 != 0) throw ConfigError("s-sample count must be even and >= 8");
    }
    double s(int m) const { return static_cast<double>(m) / M; }
};

/// Grid function with 1 (scalar), d (vector) or d*d (matrix) components per node.
/// Values are stored nodes x components.
struct CellField {
    Eigen::MatrixXd v;  // n x ncomp

    CellField() = default;
    CellField(long n, int ncomp) : v(Eigen::MatrixXd::Zero(n, ncomp)) {}
    explicit CellField(Eigen::MatrixXd values) : v(std::move(values)) {}

    long n() const { return v.rows(); }
    int ncomp() const { return static_cast<int>(v.cols()); }

    /// Discrete mean per component under uniform weights.
    Eigen::VectorXd mean(const TorusGrid& g) const { return v.colwise().sum() * g.weight(); }

    /// Discrete L2 norm over all components: sqrt(sum_i w |v_i|^2).
    double l2(const TorusGrid& g) const { return std::sqrt(v.squaredNorm() * g.weight()); }

    bool finite() const { return v.allFinite(); }
};

}  // namespace nlhom
