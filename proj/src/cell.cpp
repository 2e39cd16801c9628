#include "nlhom/cell.hpp"

#include <cmath>

#include "nlhom/fourier.hpp"

namespace nlhom {

CellOperator assemble_generator(const TorusGrid& grid, const PeriodizedKernel& ahat0,
                                const CoefficientTables& mu, double s, bool adjoint) {
    if (!(ahat0.grid == grid) || !(mu.grid == grid))
        throw GridMismatch("kernel/coefficient tables assembled on a different grid");
    if (!mu.spec->coercive())
        throw CoercivityViolation("mu_minus = " + std::to_string(mu.spec->mu_minus()) +
                                  " is not positive");

    const long n = grid.n();
    const double w = grid.weight();
    const Eigen::VectorXd sw = mu.s_weights(s);

    CellOperator op;
    op.grid = grid;
    op.s = s;
    op.adjoint = adjoint;
    op.A.resize(n, n);

    // generator row i: entries e_j = w ahat0(xi_i - xi_j) mu(xi_i, xi_j, s);
    // the adjoint stores the same numbers transposed, so A* == A^T bitwise.
    for (long i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (long j = 0; j < n; ++j) {
            double e = w * ahat0.values(grid.diff(i, j), 0) * mu.value(i, j, sw);
            row_sum += e;
            if (adjoint)
                op.A(j, i) = e;
            else
                op.A(i, j) = e;
        }
        op.A(i, i) -= row_sum;
    }
    return op;
}

CellOperator assemble_generator(const TorusGrid& grid, const KernelSpec& kern,
                                const CoefficientSpec& mu, double s, bool adjoint) {
    PeriodizedKernel ahat0 = periodized_moment_kernel(kern, grid.N, 0);
    CoefficientTables tables(mu, grid);
    return assemble_generator(grid, ahat0, tables, s, adjoint);
}

namespace {

Eigen::MatrixXd bordered_matrix(const Eigen::MatrixXd& A, double w) {
    const long n = A.rows();
    Eigen::MatrixXd B(n + 1, n + 1);
    B.topLeftCorner(n, n) = A;
    B.topRightCorner(n, 1).setOnes();
    B.bottomLeftCorner(1, n).setConstant(w);
    B(n, n) = 0.0;
    return B;
}

}  // namespace

CellField invariant_density(const CellOperator& adjoint_op, const CellTolerances& tol) {
    if (!adjoint_op.adjoint)
        throw ConfigError("invariant_density expects the adjoint operator");
    const long n = adjoint_op.grid.n();
    const double w = adjoint_op.grid.weight();

    Eigen::MatrixXd B = bordered_matrix(adjoint_op.A, w);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;

    // the kernel of a jump generator is spanned by its communicating classes:
    // the density is unique iff the off-diagonal support graph is connected
    {
        double scale = adjoint_op.A.cwiseAbs().maxCoeff();
        double thresh = 1e-14 * std::max(1.0, scale);
        std::vector<char> seen(static_cast<size_t>(n), 0);
        std::vector<long> stack = {0};
        seen[0] = 1;
        long visited = 1;
        while (!stack.empty()) {
            long i = stack.back();
            stack.pop_back();
            for (long j = 0; j < n; ++j) {
                if (seen[static_cast<size_t>(j)] || j == i) continue;
                if (std::abs(adjoint_op.A(i, j)) > thresh ||
                    std::abs(adjoint_op.A(j, i)) > thresh) {
                    seen[static_cast<size_t>(j)] = 1;
                    stack.push_back(j);
                    ++visited;
                }
            }
        }
        if (visited != n)
            throw NullSpaceDimension("jump graph splits into " + std::to_string(n - visited) +
                                     "+ disconnected nodes; null space dimension > 1");
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Eigen::VectorXd sol = lu.solve(rhs);
    Eigen::VectorXd p = sol.head(n);

    if (!p.allFinite())
        throw NullSpaceDimension("bordered invariant-density solve produced non-finite values");
    double scale = adjoint_op.A.cwiseAbs().maxCoeff();
    double residual = std::sqrt((adjoint_op.A * p).squaredNorm() * w);
    if (residual > 100.0 * tol.solve * std::max(1.0, scale) * std::max(1.0, p.cwiseAbs().maxCoeff()))
        throw NullSpaceDimension("invariant-density residual " + std::to_string(residual) +
                                 " too large; numerical null space is not one-dimensional");
    if (p.minCoeff() <= 0.0)
        throw NonPositiveDensity("invariant density attains min " +
                                 std::to_string(p.minCoeff()));

    CellField out(n, 1);
    out.v.col(0) = p;
    return out;
}

MeanZeroSolver::MeanZeroSolver(const CellOperator& op, CellTolerances tol)
    : grid_(op.grid), tol_(tol) {
    if (op.adjoint) throw ConfigError("MeanZeroSolver expects the forward generator");
    bordered_ = bordered_matrix(op.A, grid_.weight());
    lu_.compute(bordered_);
}

MeanZeroSolver::Result MeanZeroSolver::solve(const CellField& rhs, const CellField& p) const {
    const long n = grid_.n();
    const double w = grid_.weight();
    if (rhs.n() != n || p.n() != n) throw GridMismatch("rhs/p defined on a different grid");

    const int nc = rhs.ncomp();
    Result res;
    res.chi = CellField(n, nc);
    res.defect.resize(nc);
    res.residual.resize(nc);

    for (int c = 0; c < nc; ++c) {
        double defect = w * p.v.col(0).dot(rhs.v.col(c));
        double scale = std::max(1.0, std::sqrt(rhs.v.col(c).squaredNorm() * w));
        if (std::abs(defect) > tol_.compat * scale)
            throw CompatibilityViolation("defect " + std::to_string(defect) +
                                         " exceeds tolerance; F(s) is inconsistent with rhs");

        Eigen::VectorXd b(n + 1);
        b.head(n) = rhs.v.col(c);
        b(n) = 0.0;
        Eigen::VectorXd sol = lu_.solve(b);
        Eigen::VectorXd chi = sol.head(n);
        if (!chi.allFinite()) throw SolverBreakdown("bordered solve produced non-finite values");

        // pin the discrete mean to zero exactly (roundoff removal)
        chi.array() -= chi.sum() * w;

        double resid =
            std::sqrt((bordered_.topLeftCorner(n, n) * chi -
                       (rhs.v.col(c).array() - defect).matrix())
                          .squaredNorm() * w);
        if (resid > 100.0 * tol_.solve * scale)
            throw SolverBreakdown("solve residual " + std::to_string(resid) + " too large");

        res.chi.v.col(c) = chi;
        res.defect(c) = defect;
        res.residual(c) = resid;
    }
    return res;
}

CellField solve_on_mean_zero(const CellOperator& op, const CellField& rhs, const CellField& p,
                             const CellTolerances& tol) {
    return MeanZeroSolver(op, tol).solve(rhs, p).chi;
}

std::vector<CellField> s_derivative(const std::vector<CellField>& samples) {
    const int M = static_cast<int>(samples.size());
    if (M == 0) return {};
    Eigen::MatrixXd D = spectral_derivative_matrix(M);

    std::vector<CellField> out(samples.size());
    for (int m = 0; m < M; ++m)
        out[static_cast<size_t>(m)] =
            CellField(Eigen::MatrixXd::Zero(samples[0].n(), samples[0].ncomp()));
    for (int m = 0; m < M; ++m)
        for (int mp = 0; mp < M; ++mp)
            out[static_cast<size_t>(m)].v += D(m, mp) * samples[static_cast<size_t>(mp)].v;
    return out;
}

}  // namespace nlhom
