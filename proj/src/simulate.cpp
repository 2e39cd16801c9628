#include "nlhom/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "nlhom/fourier.hpp"

namespace nlhom {

BoxOperator::BoxOperator(const BoxGrid& grid, const DiscreteKernel& kernel,
                         const CoefficientSpec& mu, double alpha)
    : grid_(grid), kernel_(kernel), mu_(mu), alpha_(alpha) {
    if (kernel.dimension != 1)
        throw GridMismatch("box simulation supports d = 1 only");
    if (kernel.N != grid.n_cell)
        throw GridMismatch("kernel z-nodes must match the cell resolution");
    if (!mu.coercive())
        throw CoercivityViolation("mu_minus = " + std::to_string(mu.mu_minus()));

    const int K = static_cast<int>(mu.terms.size());
    phi_.resize(grid.n_cell, K);
    psi_.resize(grid.n_cell, K);
    for (int ic = 0; ic < grid.n_cell; ++ic) {
        double x = static_cast<double>(ic) / grid.n_cell;
        for (int k = 0; k < K; ++k) {
            phi_(ic, k) = mu.terms[static_cast<size_t>(k)].xi.eval(x);
            psi_(ic, k) = mu.terms[static_cast<size_t>(k)].eta.eval(x);
        }
    }
}

void BoxOperator::mu_table(double s, Eigen::MatrixXd& tab) const {
    const int N = grid_.n_cell;
    const int K = static_cast<int>(mu_.terms.size());
    tab.setConstant(N, N, mu_.c0);
    for (int k = 0; k < K; ++k) {
        const auto& t = mu_.terms[static_cast<size_t>(k)];
        double cw = t.c * t.s.eval(s);
        if (cw == 0.0) continue;
        tab.noalias() += cw * phi_.col(k) * psi_.col(k).transpose();
    }
}

Eigen::VectorXd BoxOperator::rates(const Eigen::MatrixXd& tab) const {
    const int N = grid_.n_cell;
    const double w = kernel_.w1d();
    Eigen::VectorXd R(N);
    for (int ic = 0; ic < N; ++ic) {
        double r = 0.0;
        for (int l = kernel_.lmin; l <= kernel_.lmax; ++l) {
            double a = kernel_.value1d(l);
            if (a == 0.0) continue;
            int jc = (ic - l) % N;
            if (jc < 0) jc += N;
            r += w * a * tab(ic, jc);
        }
        R(ic) = r;
    }
    return R;
}

double BoxOperator::apply(const std::vector<double>& u, double t, std::vector<double>& out) const {
    const long n = grid_.n_box();
    if (static_cast<long>(u.size()) != n) throw GridMismatch("field size does not match box");
    out.assign(static_cast<size_t>(n), 0.0);

    const double eps = grid_.eps();
    const double s = t / std::pow(eps, alpha_);
    const int N = grid_.n_cell;
    const double w = kernel_.w1d();
    const double inv_eps2 = 1.0 / (eps * eps);

    Eigen::MatrixXd tab;
    mu_table(s, tab);
    Eigen::VectorXd R = rates(tab);

    const int L = kernel_.lmax;
    const int Lm = kernel_.lmin;
    for (long i = 0; i < n; ++i) {
        const int ic = grid_.cell_index(i);
        double acc = 0.0;
        for (int l = Lm; l <= L; ++l) {
            double a = kernel_.value1d(l);
            if (a == 0.0) continue;
            long j = i - l;
            if (j < 0) j += n;
            else if (j >= n) j -= n;
            int jc = (ic - l) % N;
            if (jc < 0) jc += N;
            acc += w * a * tab(ic, jc) * u[static_cast<size_t>(j)];
        }
        out[static_cast<size_t>(i)] = inv_eps2 * (acc - R(ic) * u[static_cast<size_t>(i)]);
    }
    return R.maxCoeff();
}

double BoxOperator::max_rate_period_scan(int scan_samples) const {
    Eigen::MatrixXd tab;
    double rmax = 0.0;
    for (int m = 0; m < scan_samples; ++m) {
        mu_table(static_cast<double>(m) / scan_samples, tab);
        rmax = std::max(rmax, rates(tab).maxCoeff());
    }
    return rmax;
}

Eigen::VectorXd BoxOperator::fold_row(long i, double s) const {
    const int N = grid_.n_cell;
    const double w = kernel_.w1d();
    Eigen::MatrixXd tab;
    mu_table(s, tab);

    // fold the raw kernel samples per torus target first; this reproduces the
    // cell assembly's summation order, so the comparison is ulp-tight
    Eigen::VectorXd araw = Eigen::VectorXd::Zero(N);
    const int ic = grid_.cell_index(i);
    for (int l = kernel_.lmin; l <= kernel_.lmax; ++l) {
        double a = kernel_.value1d(l);
        if (a == 0.0) continue;
        int jc = (ic - l) % N;
        if (jc < 0) jc += N;
        araw(jc) += a;
    }

    Eigen::VectorXd row(N);
    double rate = 0.0;
    for (int jc = 0; jc < N; ++jc) {
        double e = w * araw(jc) * tab(ic, jc);
        row(jc) = e;
        rate += e;
    }
    row(ic) -= rate;
    return row;  // already eps^2 * stencil: the eps^-2 prefactor cancels
}

std::vector<double> apply_L_eps(const std::vector<double>& u, double t, const BoxGrid& grid,
                                const KernelSpec& kern, const CoefficientSpec& mu, double alpha) {
    BoxOperator op(grid, discretize_kernel(kern, grid.n_cell), mu, alpha);
    std::vector<double> out;
    op.apply(u, t, out);
    return out;
}

namespace {

void record_diagnostics(EvolutionState& st, const std::vector<double>& u, double h) {
    double sup = 0.0, mn = std::numeric_limits<double>::infinity(), mass = 0.0;
    for (double v : u) {
        if (!std::isfinite(v)) throw NonFiniteValue("field value is not finite");
        sup = std::max(sup, std::abs(v));
        mn = std::min(mn, v);
        mass += v;
    }
    st.sup_history.push_back(sup);
    st.min_history.push_back(mn);
    st.mass_history.push_back(mass * h);
}

}  // namespace

EvolutionState evolve_epsilon(const std::vector<double>& u0, double T, const BoxOperator& op,
                              const std::vector<double>& checkpoints, double cfl_fraction,
                              double dt_scale) {
    const BoxGrid& g = op.grid();
    if (static_cast<long>(u0.size()) != g.n_box())
        throw GridMismatch("initial field size does not match box");
    for (double tc : checkpoints)
        if (!(tc > 0.0) || tc > T + 1e-12) throw CheckpointMismatch("checkpoints must lie in (0, T]");
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
        throw CheckpointMismatch("checkpoints must be ascending");

    const double eps = g.eps();
    double rmax_scan = op.max_rate_period_scan();
    double dt_max = cfl_fraction * eps * eps / rmax_scan * dt_scale;
    if (!(dt_max > 0.0)) throw CFLViolation("non-positive CFL step");

    EvolutionState st;
    st.dt_max = dt_max;
    std::vector<double> u(u0), Lu;
    record_diagnostics(st, u, g.h());

    double t = 0.0;
    for (double tc : checkpoints) {
        double span = tc - t;
        long nsteps = std::max<long>(1, static_cast<long>(std::ceil(span / dt_max - 1e-12)));
        double dt = span / nsteps;
        for (long k = 0; k < nsteps; ++k) {
            double rate = op.apply(u, t, Lu);
            // convex-combination guard at the actual step time
            if (dt * rate / (eps * eps) > 1.0 + 1e-12)
                throw CFLViolation("dt * rate exceeds the convex-combination bound");
            for (size_t i = 0; i < u.size(); ++i) u[i] += dt * Lu[i];
            t += dt;
            record_diagnostics(st, u, g.h());
            ++st.steps;
        }
        t = tc;
        st.times.push_back(tc);
        st.snapshots.push_back(u);
    }
    return st;
}

EvolutionState solve_heat_multiplier(const std::vector<double>& u0,
                                     const std::function<double(double)>& D_cumulative,
                                     const BoxGrid& grid, const std::vector<double>& checkpoints) {
    const long n = grid.n_box();
    if (static_cast<long>(u0.size()) != n) throw GridMismatch("field size does not match box");
    auto spec0 = dft_forward(u0);
    const double Lbox = grid.length;

    EvolutionState st;
    double Dprev = 0.0;
    bool first = true;
    for (double tc : checkpoints) {
        double D = D_cumulative(tc);
        if (D < -1e-14) throw NotPSD("cumulative diffusion is negative at t = " + std::to_string(tc));
        if (!first && D < Dprev - 1e-12)
            throw NotPSD("cumulative diffusion must be nondecreasing");
        first = false;
        Dprev = D;

        auto spec = spec0;
        for (size_t k = 0; k < spec.size(); ++k) {
            double kappa = static_cast<double>(k) / Lbox;
            spec[k] *= std::exp(-4.0 * M_PI * M_PI * kappa * kappa * D);
        }
        st.times.push_back(tc);
        st.snapshots.push_back(dft_inverse(spec, static_cast<int>(n)));
    }
    return st;
}

std::vector<double> shift_field(const std::vector<double>& u, double c, double box_length) {
    const int n = static_cast<int>(u.size());
    double cf = std::fmod(c, box_length);
    auto spec = dft_forward(u);
    const int H = n / 2;
    for (int k = 1; k < H; ++k) {
        double frac = k * cf / box_length;
        double th = -2.0 * M_PI * (frac - std::floor(frac));
        spec[static_cast<size_t>(k)] *= std::complex<double>(std::cos(th), std::sin(th));
    }
    // Nyquist: the sine image vanishes at the nodes, keep the sampled cosine part
    if (n % 2 == 0) {
        double frac = H * cf / box_length;
        double th = 2.0 * M_PI * (frac - std::floor(frac));
        spec[static_cast<size_t>(H)] *= std::cos(th);
    }
    return dft_inverse(spec, n);
}

double sup_l2_error(const EvolutionState& a, const EvolutionState& b, double h, bool normalized) {
    if (a.times.size() != b.times.size())
        throw CheckpointMismatch("trajectories hold different checkpoint counts");
    double err = 0.0, ref = 0.0;
    for (size_t c = 0; c < a.times.size(); ++c) {
        if (std::abs(a.times[c] - b.times[c]) > 1e-12)
            throw CheckpointMismatch("checkpoint times differ");
        const auto& ua = a.snapshots[c];
        const auto& ub = b.snapshots[c];
        if (ua.size() != ub.size()) throw CheckpointMismatch("snapshot sizes differ");
        double e2 = 0.0, r2 = 0.0;
        for (size_t i = 0; i < ua.size(); ++i) {
            double d = ua[i] - ub[i];
            e2 += d * d;
            r2 += ub[i] * ub[i];
        }
        err = std::max(err, std::sqrt(e2 * h));
        ref = std::max(ref, std::sqrt(r2 * h));
    }
    if (normalized) return ref > 0.0 ? err / ref : err;
    return err;
}

}  // namespace nlhom
