#include "nlhom/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace nlhom {

namespace {

// -- everything below is deliberately re-derived from the problem data; it
//    must stay decoupled from the production kernel/cell/corrector code paths.

double odens(const KernelSpec& k, double z) {
    switch (k.family) {
        case KernelFamily::Uniform: {
            double u = std::fabs(z - k.center);
            if (u < k.half_width - 1e-12) return 0.5 / k.half_width;
            if (u <= k.half_width + 1e-12) return 0.25 / k.half_width;
            return 0.0;
        }
        case KernelFamily::Triangular: {
            double u = std::fabs(z - k.center);
            return u < k.half_width ? (1.0 - u / k.half_width) / k.half_width : 0.0;
        }
        case KernelFamily::TruncatedGaussian: {
            double u = std::fabs(z);
            double norm =
                k.sigma * std::sqrt(2.0 * M_PI) * std::erf(k.cutoff / (k.sigma * std::sqrt(2.0)));
            double g = std::exp(-0.5 * z * z / (k.sigma * k.sigma)) / norm;
            if (u < k.cutoff - 1e-12) return g;
            if (u <= k.cutoff + 1e-12) return 0.5 * g;
            return 0.0;
        }
    }
    return 0.0;
}

double otrig(const TrigFactor& f, double x0, double x1) {
    if (f.fn == TrigFn::Sin) return std::sin(2.0 * M_PI * (f.l[0] * x0 + f.l[1] * x1));
    if (f.fn == TrigFn::Cos) return std::cos(2.0 * M_PI * (f.l[0] * x0 + f.l[1] * x1));
    return 1.0;
}

double omu(const CoefficientSpec& mu, double x0, double x1, double e0, double e1, double s) {
    double v = mu.c0;
    for (const auto& t : mu.terms)
        v += t.c * otrig(t.xi, x0, x1) * otrig(t.eta, e0, e1) * otrig(t.s, s, 0.0);
    return v;
}

/// Gaussian elimination with partial pivoting, in place; b becomes the solution.
void ogauss(std::vector<std::vector<double>>& A, std::vector<double>& b) {
    const long n = static_cast<long>(A.size());
    for (long col = 0; col < n; ++col) {
        long piv = col;
        for (long r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (std::fabs(A[piv][col]) < 1e-300)
            throw std::runtime_error("oracle elimination hit a zero pivot");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (long r = col + 1; r < n; ++r) {
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (long c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    for (long r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (long c = r + 1; c < n; ++c) acc -= A[r][c] * b[c];
        b[r] = acc / A[r][r];
    }
}

struct OKernel {
    int N;
    int lmin, lmax;
    std::vector<double> a;  // renormalized 1-D samples

    double at(int l) const { return (l < lmin || l > lmax) ? 0.0 : a[static_cast<size_t>(l - lmin)]; }
};

OKernel osample(const KernelSpec& spec, int N) {
    OKernel k;
    k.N = N;
    double r = spec.support_radius();
    k.lmin = static_cast<int>(std::floor(-r * N)) - 1;
    k.lmax = static_cast<int>(std::ceil(r * N)) + 1;
    double mass = 0.0;
    for (int l = k.lmin; l <= k.lmax; ++l) {
        double v = odens(spec, static_cast<double>(l) / N);
        k.a.push_back(v);
        mass += v / N;
    }
    for (double& v : k.a) v /= mass;
    return k;
}

}  // namespace

OracleResult dense_oracle(const RunConfig& cfg) {
    const int d = cfg.kernel.dimension;
    const int N = cfg.n_cell;
    const long n = d == 1 ? N : static_cast<long>(N) * N;
    if (n > 1024) throw ConfigError("dense oracle limited to n <= 1024 nodes");
    const int M = cfg.s_samples;
    const double w = d == 1 ? 1.0 / N : 1.0 / (static_cast<double>(N) * N);

    OKernel ok = osample(cfg.kernel, N);

    // torus folds hat-a_q by direct lattice summation
    const int nspan = static_cast<int>(std::ceil(cfg.kernel.support_radius())) + 1;

    auto ax0 = [&](long i) { return d == 1 ? static_cast<int>(i) : static_cast<int>(i / N); };
    auto ax1 = [&](long i) { return d == 1 ? 0 : static_cast<int>(i % N); };
    auto coord = [&](int idx) { return static_cast<double>(idx) / N; };

    std::vector<double> hat0(static_cast<size_t>(n), 0.0);
    std::vector<std::vector<double>> hat1(static_cast<size_t>(d),
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    std::vector<std::vector<double>> hat2(static_cast<size_t>(d) * d,
                                          std::vector<double>(static_cast<size_t>(n), 0.0));
    for (long t = 0; t < n; ++t) {
        int t0 = ax0(t), t1 = ax1(t);
        if (d == 1) {
            for (int nn = -nspan - 1; nn <= nspan + 1; ++nn) {
                int l = t0 + nn * N;
                double a = ok.at(l);
                if (a == 0.0) continue;
                double z = static_cast<double>(l) / N;
                hat0[static_cast<size_t>(t)] += a;
                hat1[0][static_cast<size_t>(t)] += z * a;
                hat2[0][static_cast<size_t>(t)] += z * z * a;
            }
        } else {
            for (int n0 = -nspan - 1; n0 <= nspan + 1; ++n0) {
                int l0 = t0 + n0 * N;
                double a0 = ok.at(l0);
                if (a0 == 0.0) continue;
                double z0 = static_cast<double>(l0) / N;
                for (int n1 = -nspan - 1; n1 <= nspan + 1; ++n1) {
                    int l1 = t1 + n1 * N;
                    double a1 = ok.at(l1);
                    if (a1 == 0.0) continue;
                    double z1 = static_cast<double>(l1) / N;
                    double a = a0 * a1;
                    hat0[static_cast<size_t>(t)] += a;
                    hat1[0][static_cast<size_t>(t)] += z0 * a;
                    hat1[1][static_cast<size_t>(t)] += z1 * a;
                    hat2[0][static_cast<size_t>(t)] += z0 * z0 * a;
                    hat2[1][static_cast<size_t>(t)] += z0 * z1 * a;
                    hat2[2][static_cast<size_t>(t)] += z1 * z0 * a;
                    hat2[3][static_cast<size_t>(t)] += z1 * z1 * a;
                }
            }
        }
    }

    auto diff_idx = [&](long i, long j) {
        int r0 = (ax0(i) - ax0(j)) % N;
        if (r0 < 0) r0 += N;
        int r1 = (ax1(i) - ax1(j)) % N;
        if (r1 < 0) r1 += N;
        return d == 1 ? static_cast<long>(r0) : static_cast<long>(r0) * N + r1;
    };

    OracleResult out;
    out.d = d;
    out.n = n;
    out.M = M;
    out.Theta.assign(static_cast<size_t>(d) * d, 0.0);

    for (int m = 0; m < M; ++m) {
        double s = static_cast<double>(m) / M;

        // dense generator G[i][j] = w hat0(i-j) mu(xi_i, xi_j, s) with zero row sums
        std::vector<std::vector<double>> G(static_cast<size_t>(n),
                                           std::vector<double>(static_cast<size_t>(n), 0.0));
        for (long i = 0; i < n; ++i) {
            double row = 0.0;
            for (long j = 0; j < n; ++j) {
                double muv = omu(cfg.mu, coord(ax0(i)), coord(ax1(i)), coord(ax0(j)),
                                 coord(ax1(j)), s);
                double e = w * hat0[static_cast<size_t>(diff_idx(i, j))] * muv;
                G[static_cast<size_t>(i)][static_cast<size_t>(j)] = e;
                row += e;
            }
            G[static_cast<size_t>(i)][static_cast<size_t>(i)] -= row;
        }

        // invariant density from the transposed bordered system
        std::vector<std::vector<double>> B(static_cast<size_t>(n + 1),
                                           std::vector<double>(static_cast<size_t>(n + 1), 0.0));
        for (long i = 0; i < n; ++i)
            for (long j = 0; j < n; ++j)
                B[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    G[static_cast<size_t>(j)][static_cast<size_t>(i)];
        for (long i = 0; i < n; ++i) {
            B[static_cast<size_t>(i)][static_cast<size_t>(n)] = 1.0;
            B[static_cast<size_t>(n)][static_cast<size_t>(i)] = w;
        }
        std::vector<double> rhs(static_cast<size_t>(n + 1), 0.0);
        rhs[static_cast<size_t>(n)] = 1.0;
        ogauss(B, rhs);
        std::vector<double> p(rhs.begin(), rhs.begin() + n);

        // f, F1 and the first corrector, one component at a time
        std::vector<double> F1(static_cast<size_t>(d), 0.0);
        std::vector<double> chi1(static_cast<size_t>(d) * n, 0.0);
        for (int c = 0; c < d; ++c) {
            std::vector<double> f(static_cast<size_t>(n), 0.0);
            for (long i = 0; i < n; ++i)
                for (long l = 0; l < n; ++l) {
                    long j = diff_idx(i, l);
                    double muv = omu(cfg.mu, coord(ax0(i)), coord(ax1(i)), coord(ax0(j)),
                                     coord(ax1(j)), s);
                    f[static_cast<size_t>(i)] +=
                        w * hat1[static_cast<size_t>(c)][static_cast<size_t>(l)] * muv;
                }
            double Fc = 0.0;
            for (long i = 0; i < n; ++i) Fc += w * f[static_cast<size_t>(i)] * p[static_cast<size_t>(i)];
            F1[static_cast<size_t>(c)] = Fc;

            std::vector<std::vector<double>> Bc(static_cast<size_t>(n + 1),
                                                std::vector<double>(static_cast<size_t>(n + 1), 0.0));
            for (long i = 0; i < n; ++i)
                for (long j = 0; j < n; ++j)
                    Bc[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                        G[static_cast<size_t>(i)][static_cast<size_t>(j)];
            for (long i = 0; i < n; ++i) {
                Bc[static_cast<size_t>(i)][static_cast<size_t>(n)] = 1.0;
                Bc[static_cast<size_t>(n)][static_cast<size_t>(i)] = w;
            }
            std::vector<double> bc(static_cast<size_t>(n + 1), 0.0);
            for (long i = 0; i < n; ++i) bc[static_cast<size_t>(i)] = f[static_cast<size_t>(i)] - Fc;
            ogauss(Bc, bc);
            double mean = 0.0;
            for (long i = 0; i < n; ++i) mean += w * bc[static_cast<size_t>(i)];
            for (long i = 0; i < n; ++i)
                chi1[static_cast<size_t>(c) * n + static_cast<size_t>(i)] =
                    bc[static_cast<size_t>(i)] - mean;
        }

        // theta(s) by plain double summation
        std::vector<double> th(static_cast<size_t>(d) * d, 0.0);
        for (int r = 0; r < d; ++r) {
            double chp = 0.0;
            for (long i = 0; i < n; ++i)
                chp += w * chi1[static_cast<size_t>(r) * n + static_cast<size_t>(i)] *
                       p[static_cast<size_t>(i)];
            for (int c = 0; c < d; ++c)
                th[static_cast<size_t>(r) * d + c] = chp * F1[static_cast<size_t>(c)];
        }
        for (long i = 0; i < n; ++i) {
            for (long l = 0; l < n; ++l) {
                long j = diff_idx(i, l);
                double muv = omu(cfg.mu, coord(ax0(i)), coord(ax1(i)), coord(ax0(j)),
                                 coord(ax1(j)), s);
                double wp = w * w * muv * p[static_cast<size_t>(i)];
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c)
                        th[static_cast<size_t>(r) * d + c] +=
                            wp * (0.5 * hat2[static_cast<size_t>(r) * d + c][static_cast<size_t>(l)] -
                                  hat1[static_cast<size_t>(r)][static_cast<size_t>(l)] *
                                      chi1[static_cast<size_t>(c) * n + static_cast<size_t>(j)]);
            }
        }

        for (int rc = 0; rc < d * d; ++rc)
            out.Theta[static_cast<size_t>(rc)] += th[static_cast<size_t>(rc)] / M;
        out.p.push_back(std::move(p));
        out.chi1.push_back(std::move(chi1));
        out.F1.push_back(std::move(F1));
        out.theta.push_back(std::move(th));
    }
    return out;
}

}  // namespace nlhom
