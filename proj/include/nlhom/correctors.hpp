#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlhom/cell.hpp"
#include "nlhom/coefficient.hpp"
#include "nlhom/grid.hpp"
#include "nlhom/kernel.hpp"

namespace nlhom {

/// Corrector chain bookkeeping for a scaling exponent alpha in (0,2):
/// k = floor(1/(2-alpha)), gamma_j = 1 + (j-1)(2-alpha) for j = 1..k+1.
/// alpha = 2 - 1/k is the exceptional case where gamma_k = alpha and the k-th
/// drift term enters at order one.
struct CorrectorSchedule {
    double alpha = 1.0;
    int k = 0;
    std::vector<double> gamma;  // gamma_1..gamma_{k+1}
    bool exceptional = false;

    int levels() const { return k + 1; }
};

CorrectorSchedule corrector_schedule(double alpha);

/// f(xi, s) = integral of z a(z) mu(xi, xi - z, s) dz, folded through ahat1.
CellField rhs_first_corrector(const TorusGrid& grid, const PeriodizedKernel& ahat1,
                              const CoefficientTables& mu, double s);

/// F = integral of rhs . p dxi (per component); subtracting it from rhs makes
/// the Fredholm problem compatible by construction.
Eigen::VectorXd solvability_value(const TorusGrid& grid, const CellField& rhs,
                                  const CellField& p);

/// theta(s), the order-one solvability matrix: (chi1, p)-weighted drift dyad
/// plus the second-moment jump average.
Eigen::MatrixXd theta_of_s(const TorusGrid& grid, const CellField& chi1, const CellField& p,
                           const Eigen::VectorXd& b0_plus_beta0, const PeriodizedKernel& ahat1,
                           const PeriodizedKernel& ahat2, const CoefficientTables& mu, double s);

/// Right-hand side of the kappa problem before subtracting theta:
/// G(xi, s) = integral a mu (z x z / 2 - z x chi1(xi - z)) dz as a d*d field.
CellField second_order_rhs_field(const TorusGrid& grid, const CellField& chi1,
                                 const PeriodizedKernel& ahat1, const PeriodizedKernel& ahat2,
                                 const CoefficientTables& mu, double s);

/// Mean-zero kappa with A kappa = theta(s) - chi1 x F1(s) - G(xi, s).
CellField solve_kappa(const MeanZeroSolver& solver, const TorusGrid& grid, const CellField& chi1,
                      const CellField& p, const Eigen::MatrixXd& theta_s,
                      const Eigen::VectorXd& b0_plus_beta0, const CellField& G, int d);

/// Everything the chain produces, per s-sample.
struct CorrectorSet {
    CorrectorSchedule schedule;
    TorusGrid grid;
    SSampleSet ssamples;

    std::vector<CellField> p;                     // M fields, scalar
    std::vector<std::vector<CellField>> chi;      // levels x M fields, d components
    std::vector<CellField> kappa;                 // M fields, d*d components
    std::vector<Eigen::MatrixXd> F;               // levels entries, M x d sample matrices
    std::vector<Eigen::MatrixXd> theta;           // M matrices, d x d

    // solvability diagnostics, maxima over samples and components
    std::vector<double> max_defect;               // per level (plus kappa at the end)
    std::vector<double> max_residual;
    double max_mean_abs = 0.0;                    // largest |<chi_j>| or |<kappa>|
    double p_min = 0.0, p_max = 0.0;
    double max_p_residual = 0.0;                  // ||A* p||_2 over samples
};

/// Builds p, chi_1..chi_{k+1}, kappa, F_1..F_{k+1} and theta(s) on all
/// s-samples. Frozen-s elliptic solves only; levels advance across a spectral
/// s-derivative barrier.
CorrectorSet build_corrector_chain(const CorrectorSchedule& schedule, const TorusGrid& grid,
                                   const KernelSpec& kern, const CoefficientSpec& mu,
                                   const SSampleSet& ssamples, const CellTolerances& tol = {});

}  // namespace nlhom
