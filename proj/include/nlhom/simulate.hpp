#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "nlhom/coefficient.hpp"
#include "nlhom/kernel.hpp"

namespace nlhom {

/// Periodic computational box [-L/2, L/2) holding an integer number of
/// eps-cells; node spacing h = eps / n_cell, so the oscillating coefficient
/// field is exactly periodic on the box and jump targets land on nodes.
struct BoxGrid {
    int length = 8;   // L, macroscopic units
    int q = 8;        // eps = 1/q
    int n_cell = 32;  // shared with the cell module

    BoxGrid() = default;
    BoxGrid(int length_, int q_, int n_cell_) : length(length_), q(q_), n_cell(n_cell_) {
        if (length < 1 || q < 1 || n_cell < 4) throw ConfigError("invalid box grid");
        if (n_box() % 2 != 0) throw ConfigError("box node count must be even");
    }

    long n_box() const { return static_cast<long>(length) * q * n_cell; }
    double eps() const { return 1.0 / q; }
    double h() const { return eps() / n_cell; }
    double x(long i) const { return -0.5 * length + i * h(); }

    /// Cell-torus node index of x_i / eps mod 1.
    int cell_index(long i) const {
        long r = (i - n_box() / 2) % n_cell;
        return static_cast<int>(r < 0 ? r + n_cell : r);
    }
};

/// Trajectory snapshots plus per-step diagnostics (maximum principle, mass).
struct EvolutionState {
    std::vector<double> times;
    std::vector<std::vector<double>> snapshots;
    std::vector<double> sup_history;   // per step, starting with the initial field
    std::vector<double> min_history;
    std::vector<double> mass_history;  // sum u_i h
    double dt_max = 0.0;
    long steps = 0;

    bool sup_nonincreasing(double rel_slack = 1e-13) const {
        for (size_t i = 1; i < sup_history.size(); ++i)
            if (sup_history[i] > sup_history[i - 1] * (1.0 + rel_slack) + 1e-300) return false;
        return true;
    }
    double min_over_run() const {
        double m = std::numeric_limits<double>::infinity();
        for (double v : min_history) m = std::min(m, v);
        return m;
    }
};

/// The jump generator L^eps(t) restricted to the box, sharing the cell
/// module's z-nodes and renormalized weights.
class BoxOperator {
public:
    BoxOperator(const BoxGrid& grid, const DiscreteKernel& kernel, const CoefficientSpec& mu,
                double alpha);

    const BoxGrid& grid() const { return grid_; }
    double alpha() const { return alpha_; }

    /// out = L^eps(t) u; returns the largest jump rate encountered (for CFL).
    double apply(const std::vector<double>& u, double t, std::vector<double>& out) const;

    /// Largest total jump rate over a dense scan of the s-period (CFL input).
    double max_rate_period_scan(int scan_samples = 256) const;

    /// One stencil row folded onto the cell torus and multiplied by eps^2:
    /// must reproduce the assembled A(s) row (keystone consistency).
    Eigen::VectorXd fold_row(long i, double s) const;

private:
    void mu_table(double s, Eigen::MatrixXd& tab) const;
    Eigen::VectorXd rates(const Eigen::MatrixXd& tab) const;

    BoxGrid grid_;
    DiscreteKernel kernel_;
    CoefficientSpec mu_;
    double alpha_;
    Eigen::MatrixXd phi_, psi_;  // n_cell x K factor tables
};

std::vector<double> apply_L_eps(const std::vector<double>& u, double t, const BoxGrid& grid,
                                const KernelSpec& kern, const CoefficientSpec& mu, double alpha);

/// Explicit Euler under the CFL rule dt = cfl * eps^2 / max-rate (times an
/// optional refinement factor); the one-step update is a convex combination,
/// so positivity and the sup-norm contraction hold step by step.
EvolutionState evolve_epsilon(const std::vector<double>& u0, double T, const BoxOperator& op,
                              const std::vector<double>& checkpoints, double cfl_fraction = 0.9,
                              double dt_scale = 1.0);

/// Exact spectral solution u_hat(k, t) = exp(-(2 pi k/L)^2 Dcum(t)) u0_hat(k)
/// on box harmonics; Dcum must be nonnegative and nondecreasing.
EvolutionState solve_heat_multiplier(const std::vector<double>& u0,
                                     const std::function<double(double)>& D_cumulative,
                                     const BoxGrid& grid, const std::vector<double>& checkpoints);

/// Spectral translation: shift_field(u, c)(x) = u(x - c), c reduced mod L.
std::vector<double> shift_field(const std::vector<double>& u, double c, double box_length);

/// max over matching checkpoints of the grid-quadrature L2 distance.
double sup_l2_error(const EvolutionState& a, const EvolutionState& b, double h,
                    bool normalized = false);

}  // namespace nlhom
