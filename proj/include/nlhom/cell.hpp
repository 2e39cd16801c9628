#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "nlhom/coefficient.hpp"
#include "nlhom/grid.hpp"
#include "nlhom/kernel.hpp"

namespace nlhom {

struct CellTolerances {
    double compat = 1e-10;
    double solve = 1e-10;
};

/// Dense frozen-time generator A(s) (or its adjoint) on the torus grid.
/// Off-diagonal entries w * ahat0(xi_i - xi_j) * mu(xi_i, xi_j, s); the diagonal
/// makes generator rows sum to zero, and the adjoint is the exact transpose.
struct CellOperator {
    TorusGrid grid;
    double s = 0.0;
    bool adjoint = false;
    Eigen::MatrixXd A;

    double max_row_sum_abs() const {
        if (adjoint) return (Eigen::RowVectorXd::Ones(A.rows()) * A).cwiseAbs().maxCoeff();
        return (A * Eigen::VectorXd::Ones(A.cols())).cwiseAbs().maxCoeff();
    }
};

/// Assembles A(s) (adjoint = false) or A*(s) (adjoint = true).
CellOperator assemble_generator(const TorusGrid& grid, const PeriodizedKernel& ahat0,
                                const CoefficientTables& mu, double s, bool adjoint);

CellOperator assemble_generator(const TorusGrid& grid, const KernelSpec& kern,
                                const CoefficientSpec& mu, double s, bool adjoint);

/// Invariant density: A*(s) p = 0, discrete mean 1, positive. Solved through the
/// bordered system (append the normalization row); a failed bordered solve or a
/// large residual signals a null space that is not one-dimensional.
CellField invariant_density(const CellOperator& adjoint_op, const CellTolerances& tol = {});

/// Reusable factorization of the bordered mean-zero system for one A(s).
/// Fredholm solve: A chi = rhs - defect, <chi> = 0; the compatibility defect
/// <rhs, p> is projected out and reported, never silently absorbed.
class MeanZeroSolver {
public:
    MeanZeroSolver(const CellOperator& op, CellTolerances tol = {});

    struct Result {
        CellField chi;
        Eigen::VectorXd defect;    // compatibility defect per component
        Eigen::VectorXd residual;  // ||A chi - (rhs - defect)||_2 per component
    };

    /// p must be the invariant density of the matching adjoint operator.
    Result solve(const CellField& rhs, const CellField& p) const;

private:
    const TorusGrid grid_;
    CellTolerances tol_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::MatrixXd bordered_;  // owns the matrix the factorization references
};

CellField solve_on_mean_zero(const CellOperator& op, const CellField& rhs, const CellField& p,
                             const CellTolerances& tol = {});

/// Spectral differentiation in s of a 1-periodic family of fields sampled on an
/// SSampleSet; exact for trigonometric polynomials of degree < M/2.
std::vector<CellField> s_derivative(const std::vector<CellField>& samples);

}  // namespace nlhom
