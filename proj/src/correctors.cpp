#include "nlhom/correctors.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace nlhom {

CorrectorSchedule corrector_schedule(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw AlphaOutOfRange("alpha must lie in (0,2), got " + std::to_string(alpha));

    CorrectorSchedule sch;
    sch.alpha = alpha;
    // snap against roundoff so alpha = 2 - 1/k lands on the exceptional branch
    sch.k = static_cast<int>(std::floor(1.0 / (2.0 - alpha) + 1e-12));
    sch.gamma.resize(static_cast<size_t>(sch.k) + 1);
    for (int j = 1; j <= sch.k + 1; ++j)
        sch.gamma[static_cast<size_t>(j - 1)] = 1.0 + (j - 1) * (2.0 - alpha);
    sch.exceptional = sch.k >= 1 && std::abs(alpha - (2.0 - 1.0 / sch.k)) <= 1e-12;
    return sch;
}

CellField rhs_first_corrector(const TorusGrid& grid, const PeriodizedKernel& ahat1,
                              const CoefficientTables& mu, double s) {
    if (!(ahat1.grid == grid)) throw GridMismatch("ahat1 assembled on a different grid");
    const long n = grid.n();
    const int d = grid.d;
    const double w = grid.weight();
    const Eigen::VectorXd sw = mu.s_weights(s);

    CellField f(n, d);
    for (long i = 0; i < n; ++i) {
        for (long l = 0; l < n; ++l) {
            long j = grid.diff(i, l);  // eta = xi - z
            double m = w * mu.value(i, j, sw);
            for (int c = 0; c < d; ++c) f.v(i, c) += m * ahat1.values(l, c);
        }
    }
    return f;
}

Eigen::VectorXd solvability_value(const TorusGrid& grid, const CellField& rhs,
                                  const CellField& p) {
    return rhs.v.transpose() * p.v.col(0) * grid.weight();
}

CellField second_order_rhs_field(const TorusGrid& grid, const CellField& chi1,
                                 const PeriodizedKernel& ahat1, const PeriodizedKernel& ahat2,
                                 const CoefficientTables& mu, double s) {
    const long n = grid.n();
    const int d = grid.d;
    const double w = grid.weight();
    const Eigen::VectorXd sw = mu.s_weights(s);

    CellField G(n, d * d);
    for (long i = 0; i < n; ++i) {
        for (long l = 0; l < n; ++l) {
            long j = grid.diff(i, l);  // eta = xi - z
            double m = w * mu.value(i, j, sw);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    G.v(i, r * d + c) +=
                        m * (0.5 * ahat2.values(l, r * d + c) - ahat1.values(l, r) * chi1.v(j, c));
        }
    }
    return G;
}

Eigen::MatrixXd theta_of_s(const TorusGrid& grid, const CellField& chi1, const CellField& p,
                           const Eigen::VectorXd& b0_plus_beta0, const PeriodizedKernel& ahat1,
                           const PeriodizedKernel& ahat2, const CoefficientTables& mu, double s) {
    const int d = grid.d;
    CellField G = second_order_rhs_field(grid, chi1, ahat1, ahat2, mu, s);
    Eigen::VectorXd chi1_p = chi1.v.transpose() * p.v.col(0) * grid.weight();
    Eigen::VectorXd G_p = G.v.transpose() * p.v.col(0) * grid.weight();

    Eigen::MatrixXd theta(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            theta(r, c) = chi1_p(r) * b0_plus_beta0(c) + G_p(r * d + c);
    return theta;
}

CellField solve_kappa(const MeanZeroSolver& solver, const TorusGrid& grid, const CellField& chi1,
                      const CellField& p, const Eigen::MatrixXd& theta_s,
                      const Eigen::VectorXd& b0_plus_beta0, const CellField& G, int d) {
    const long n = grid.n();
    CellField rhs(n, d * d);
    for (long i = 0; i < n; ++i)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c)
                rhs.v(i, r * d + c) =
                    theta_s(r, c) - chi1.v(i, r) * b0_plus_beta0(c) - G.v(i, r * d + c);
    return solver.solve(rhs, p).chi;
}

namespace {

/// Per-sample factorizations, cached when the grid is small enough to keep
/// all of them in memory; otherwise re-assembled on demand.
class SampleSolvers {
public:
    SampleSolvers(const TorusGrid& grid, const PeriodizedKernel& ahat0,
                  const CoefficientTables& mu, const SSampleSet& ss, CellTolerances tol)
        : grid_(grid), ahat0_(ahat0), mu_(mu), ss_(ss), tol_(tol) {
        cache_ = grid.n() <= 256;
        if (cache_) cached_.resize(static_cast<size_t>(ss.M));
    }

    const MeanZeroSolver& get(int m) {
        if (cache_) {
            auto& slot = cached_[static_cast<size_t>(m)];
            if (!slot) slot = build(m);
            return *slot;
        }
        scratch_ = build(m);
        return *scratch_;
    }

private:
    std::unique_ptr<MeanZeroSolver> build(int m) const {
        CellOperator A = assemble_generator(grid_, ahat0_, mu_, ss_.s(m), false);
        return std::make_unique<MeanZeroSolver>(A, tol_);
    }

    TorusGrid grid_;
    const PeriodizedKernel& ahat0_;
    const CoefficientTables& mu_;
    SSampleSet ss_;
    CellTolerances tol_;
    bool cache_ = false;
    std::vector<std::unique_ptr<MeanZeroSolver>> cached_;
    std::unique_ptr<MeanZeroSolver> scratch_;
};

}  // namespace

CorrectorSet build_corrector_chain(const CorrectorSchedule& schedule, const TorusGrid& grid,
                                   const KernelSpec& kern, const CoefficientSpec& mu,
                                   const SSampleSet& ssamples, const CellTolerances& tol) {
    if (kern.dimension != grid.d)
        throw ScheduleMismatch("kernel dimension does not match the torus grid");

    const int d = grid.d;
    const int M = ssamples.M;
    const int levels = schedule.levels();
    const double w = grid.weight();

    DiscreteKernel dk = discretize_kernel(kern, grid.N);
    PeriodizedKernel ahat0 = periodize(dk, 0);
    PeriodizedKernel ahat1 = periodize(dk, 1);
    PeriodizedKernel ahat2 = periodize(dk, 2);
    CoefficientTables tables(mu, grid);

    CorrectorSet set;
    set.schedule = schedule;
    set.grid = grid;
    set.ssamples = ssamples;
    set.p.resize(static_cast<size_t>(M));
    set.chi.assign(static_cast<size_t>(levels), std::vector<CellField>(static_cast<size_t>(M)));
    set.kappa.resize(static_cast<size_t>(M));
    set.F.assign(static_cast<size_t>(levels), Eigen::MatrixXd::Zero(M, d));
    set.theta.resize(static_cast<size_t>(M));
    set.max_defect.assign(static_cast<size_t>(levels) + 1, 0.0);
    set.max_residual.assign(static_cast<size_t>(levels) + 1, 0.0);

    SampleSolvers solvers(grid, ahat0, tables, ssamples, tol);

    // level 1: invariant densities and first correctors, sample by sample
    double p_min = std::numeric_limits<double>::infinity();
    double p_max = -std::numeric_limits<double>::infinity();
    for (int m = 0; m < M; ++m) {
        double s = ssamples.s(m);
        CellOperator Aadj = assemble_generator(grid, ahat0, tables, s, true);
        CellField p = invariant_density(Aadj, tol);
        set.max_p_residual = std::max(
            set.max_p_residual, std::sqrt((Aadj.A * p.v.col(0)).squaredNorm() * w));
        p_min = std::min(p_min, p.v.col(0).minCoeff());
        p_max = std::max(p_max, p.v.col(0).maxCoeff());

        CellField f = rhs_first_corrector(grid, ahat1, tables, s);
        Eigen::VectorXd F1 = solvability_value(grid, f, p);
        set.F[0].row(m) = F1.transpose();

        CellField rhs(f.v);
        rhs.v.rowwise() -= F1.transpose();
        auto sol = solvers.get(m).solve(rhs, p);
        set.max_defect[0] = std::max(set.max_defect[0], sol.defect.cwiseAbs().maxCoeff());
        set.max_residual[0] = std::max(set.max_residual[0], sol.residual.cwiseAbs().maxCoeff());
        set.max_mean_abs =
            std::max(set.max_mean_abs, sol.chi.mean(grid).cwiseAbs().maxCoeff());

        set.p[static_cast<size_t>(m)] = std::move(p);
        set.chi[0][static_cast<size_t>(m)] = std::move(sol.chi);
    }
    set.p_min = p_min;
    set.p_max = p_max;

    // higher levels: each needs d/ds of the previous level on every sample
    for (int lev = 1; lev < levels; ++lev) {
        std::vector<CellField> dchi = s_derivative(set.chi[static_cast<size_t>(lev - 1)]);
        for (int m = 0; m < M; ++m) {
            const CellField& p = set.p[static_cast<size_t>(m)];
            Eigen::VectorXd Fnext = solvability_value(grid, dchi[static_cast<size_t>(m)], p);
            set.F[static_cast<size_t>(lev)].row(m) = Fnext.transpose();

            CellField rhs(dchi[static_cast<size_t>(m)].v);
            rhs.v.rowwise() -= Fnext.transpose();
            auto sol = solvers.get(m).solve(rhs, p);
            set.max_defect[static_cast<size_t>(lev)] =
                std::max(set.max_defect[static_cast<size_t>(lev)],
                         sol.defect.cwiseAbs().maxCoeff());
            set.max_residual[static_cast<size_t>(lev)] =
                std::max(set.max_residual[static_cast<size_t>(lev)],
                         sol.residual.cwiseAbs().maxCoeff());
            set.max_mean_abs =
                std::max(set.max_mean_abs, sol.chi.mean(grid).cwiseAbs().maxCoeff());
            set.chi[static_cast<size_t>(lev)][static_cast<size_t>(m)] = std::move(sol.chi);
        }
    }

    // order-one solvability: theta(s) and the second-order corrector kappa
    for (int m = 0; m < M; ++m) {
        double s = ssamples.s(m);
        const CellField& p = set.p[static_cast<size_t>(m)];
        const CellField& chi1 = set.chi[0][static_cast<size_t>(m)];
        Eigen::VectorXd F1 = set.F[0].row(m).transpose();

        CellField G = second_order_rhs_field(grid, chi1, ahat1, ahat2, tables, s);
        Eigen::VectorXd chi1_p = chi1.v.transpose() * p.v.col(0) * w;
        Eigen::VectorXd G_p = G.v.transpose() * p.v.col(0) * w;
        Eigen::MatrixXd theta(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) theta(r, c) = chi1_p(r) * F1(c) + G_p(r * d + c);
        set.theta[static_cast<size_t>(m)] = theta;

        const long n = grid.n();
        CellField rhs(n, d * d);
        for (long i = 0; i < n; ++i)
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    rhs.v(i, r * d + c) =
                        theta(r, c) - chi1.v(i, r) * F1(c) - G.v(i, r * d + c);
        auto sol = solvers.get(m).solve(rhs, p);
        set.max_defect.back() = std::max(set.max_defect.back(), sol.defect.cwiseAbs().maxCoeff());
        set.max_residual.back() =
            std::max(set.max_residual.back(), sol.residual.cwiseAbs().maxCoeff());
        set.max_mean_abs = std::max(set.max_mean_abs, sol.chi.mean(grid).cwiseAbs().maxCoeff());
        set.kappa[static_cast<size_t>(m)] = std::move(sol.chi);
    }

    return set;
}

}  // namespace nlhom
