#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nlhom/simulate.hpp"

using namespace nlhom;

namespace {

KernelSpec uniform1d(double c, double r) {
    KernelSpec k;
    k.family = KernelFamily::Uniform;
    k.dimension = 1;
    k.center = c;
    k.half_width = r;
    return k;
}

CoefficientSpec mu_const(double v) {
    CoefficientSpec mu;
    mu.c0 = v;
    return mu;
}

CoefficientSpec mu_arrival(double beta) {
    CoefficientSpec mu;
    mu.c0 = 1.0;
    CoefficientTerm t;
    t.c = beta;
    t.eta = {TrigFn::Cos, {1, 0}};
    mu.terms.push_back(t);
    return mu;
}

std::vector<double> random_field(long n, unsigned seed, bool nonnegative = false) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(nonnegative ? 0.0 : -1.0, 1.0);
    std::vector<double> u(static_cast<size_t>(n));
    for (auto& v : u) v = dist(rng);
    return u;
}

double l2(const std::vector<double>& u, double h) {
    double s = 0.0;
    for (double v : u) s += v * v;
    return std::sqrt(s * h);
}

/// Discrete symbol of L^eps on the box harmonic exp(2 pi i kappa x) for mu = 1.
std::complex<double> discrete_symbol(const DiscreteKernel& dk, double eps, double kappa) {
    std::complex<double> acc(0.0, 0.0);
    for (int l = dk.lmin; l <= dk.lmax; ++l) {
        double a = dk.value1d(l);
        if (a == 0.0) continue;
        double th = -2.0 * M_PI * kappa * eps * dk.z(l);
        acc += dk.w1d() * a * (std::complex<double>(std::cos(th), std::sin(th)) - 1.0);
    }
    return acc / (eps * eps);
}

}  // namespace

TEST_CASE("generator kills constants and respects the Schur bound") {
    BoxGrid box(2, 4, 16);
    auto dk = discretize_kernel(uniform1d(0.0, 1.0), box.n_cell);
    BoxOperator op(box, dk, mu_arrival(0.5), 0.5);

    std::vector<double> ones(static_cast<size_t>(box.n_box()), 3.7), out;
    op.apply(ones, 0.13, out);
    for (double v : out) CHECK(std::abs(v) <= 1e-9);  // eps^-2 scale roundoff

    auto u = random_field(box.n_box(), 7);
    op.apply(u, 0.0, out);
    double bound = 2.0 / (box.eps() * box.eps()) * mu_arrival(0.5).mu_plus();
    CHECK(l2(out, box.h()) <= bound * l2(u, box.h()));
}

TEST_CASE("harmonics diagonalize the homogeneous operator") {
    BoxGrid box(4, 4, 32);
    auto dk = discretize_kernel(uniform1d(0.0, 1.0), box.n_cell);
    BoxOperator op(box, dk, mu_const(1.0), 1.0);

    double kappa = 2.0 / box.length;  // integer box harmonic
    auto sym = discrete_symbol(dk, box.eps(), kappa);
    CHECK(std::abs(sym.imag()) <= 1e-12);  // even kernel, symmetric sampling

    std::vector<double> u(static_cast<size_t>(box.n_box())), out;
    for (long i = 0; i < box.n_box(); ++i)
        u[static_cast<size_t>(i)] = std::cos(2.0 * M_PI * kappa * box.x(i));
    op.apply(u, 0.0, out);
    for (long i = 0; i < box.n_box(); ++i)
        CHECK(std::abs(out[static_cast<size_t>(i)] - sym.real() * u[static_cast<size_t>(i)]) <=
              1e-9);
}

TEST_CASE("grid mismatch between kernel nodes and box cells is rejected") {
    BoxGrid box(2, 4, 16);
    auto dk = discretize_kernel(uniform1d(0.0, 1.0), 32);
    CHECK_THROWS_AS(BoxOperator(box, dk, mu_const(1.0), 1.0), GridMismatch);
}

TEST_CASE("explicit Euler trajectory") {
    BoxGrid box(2, 8, 16);
    auto dk = discretize_kernel(uniform1d(0.0, 1.0), box.n_cell);
    BoxOperator op(box, dk, mu_const(1.0), 1.0);

    SUBCASE("harmonic matches the exact discrete exponential to O(dt)") {
        double kappa = 1.0 / box.length;
        auto sym = discrete_symbol(dk, box.eps(), kappa);
        std::vector<double> u0(static_cast<size_t>(box.n_box()));
        for (long i = 0; i < box.n_box(); ++i)
            u0[static_cast<size_t>(i)] = std::cos(2.0 * M_PI * kappa * box.x(i));

        double T = 0.5;
        auto coarse = evolve_epsilon(u0, T, op, {T}, 0.9, 1.0);
        auto fine = evolve_epsilon(u0, T, op, {T}, 0.9, 0.25);

        double exact = std::exp(sym.real() * T);
        double err_coarse = 0.0, err_fine = 0.0;
        for (long i = 0; i < box.n_box(); ++i) {
            err_coarse = std::max(err_coarse,
                                  std::abs(coarse.snapshots[0][static_cast<size_t>(i)] -
                                           exact * u0[static_cast<size_t>(i)]));
            err_fine = std::max(err_fine, std::abs(fine.snapshots[0][static_cast<size_t>(i)] -
                                                   exact * u0[static_cast<size_t>(i)]));
        }
        // first-order in dt: quartering dt cuts the error by about four
        CHECK(err_fine <= 0.30 * err_coarse);
        CHECK(err_coarse <= 1e-2);
    }

    SUBCASE("positivity and maximum principle under CFL") {
        auto u0 = random_field(box.n_box(), 11, true);
        auto st = evolve_epsilon(u0, 0.25, op, {0.25}, 0.9, 1.0);
        CHECK(st.sup_nonincreasing());
        CHECK(st.min_over_run() >= 0.0);
    }

    SUBCASE("symmetric generator conserves discrete mass") {
        auto u0 = random_field(box.n_box(), 13);
        auto st = evolve_epsilon(u0, 0.1, op, {0.1}, 0.9, 1.0);
        for (size_t k = 1; k < st.mass_history.size(); ++k)
            CHECK(std::abs(st.mass_history[k] - st.mass_history[0]) <=
                  1e-12 * std::max(1.0, std::abs(st.mass_history[0])) *
                      static_cast<double>(k));
    }

    SUBCASE("checkpoints outside (0, T] are rejected") {
        auto u0 = random_field(box.n_box(), 17);
        CHECK_THROWS_AS(evolve_epsilon(u0, 0.5, op, {0.75}, 0.9, 1.0), CheckpointMismatch);
    }
}

TEST_CASE("spectral heat solver") {
    BoxGrid box(16, 4, 32);  // wide box so wrap-around is negligible

    SUBCASE("gaussian closed form") {
        double Theta = 1.0 / 6.0;
        std::vector<double> u0(static_cast<size_t>(box.n_box()));
        for (long i = 0; i < box.n_box(); ++i) {
            double x = box.x(i);
            u0[static_cast<size_t>(i)] = std::exp(-x * x);
        }
        auto st = solve_heat_multiplier(
            u0, [&](double t) { return Theta * t; }, box, {0.5, 1.0});
        for (size_t c = 0; c < st.times.size(); ++c) {
            double den = 1.0 + 4.0 * Theta * st.times[c];
            for (long i = 0; i < box.n_box(); ++i) {
                double x = box.x(i);
                double expect = std::exp(-x * x / den) / std::sqrt(den);
                CHECK(std::abs(st.snapshots[c][static_cast<size_t>(i)] - expect) <= 1e-8);
            }
        }
    }

    SUBCASE("zero diffusion is the identity") {
        auto u0 = random_field(box.n_box(), 23);
        auto st = solve_heat_multiplier(u0, [](double) { return 0.0; }, box, {1.0});
        for (long i = 0; i < box.n_box(); ++i)
            CHECK(std::abs(st.snapshots[0][static_cast<size_t>(i)] - u0[static_cast<size_t>(i)]) <=
                  1e-12);
    }

    SUBCASE("time-modulated diffusion equals the effective-time solution") {
        double Theta0 = 0.2, eps_alpha = std::pow(0.125, 0.5);
        auto Dmod = [&](double t) {
            // integral of (1 + sin(2 pi s / eps_alpha) / 2) Theta0
            double S = t / eps_alpha;
            return Theta0 * (t + eps_alpha * (1.0 - std::cos(2.0 * M_PI * S)) / (4.0 * M_PI));
        };
        std::vector<double> u0(static_cast<size_t>(box.n_box()));
        for (long i = 0; i < box.n_box(); ++i) u0[static_cast<size_t>(i)] =
            std::exp(-box.x(i) * box.x(i));
        auto a = solve_heat_multiplier(u0, Dmod, box, {0.3, 0.7, 1.0});
        for (size_t c = 0; c < a.times.size(); ++c) {
            double tau = Dmod(a.times[c]) / Theta0;  // effective time
            auto b = solve_heat_multiplier(
                u0, [&](double t) { return Theta0 * (t / a.times[c]) * tau; }, box,
                {a.times[c]});
            for (long i = 0; i < box.n_box(); ++i)
                CHECK(std::abs(a.snapshots[c][static_cast<size_t>(i)] -
                               b.snapshots[0][static_cast<size_t>(i)]) <= 1e-10);
        }
    }

    SUBCASE("negative cumulative diffusion is rejected") {
        auto u0 = random_field(box.n_box(), 29);
        CHECK_THROWS_AS(
            solve_heat_multiplier(u0, [](double) { return -0.1; }, box, {1.0}), NotPSD);
    }
}

TEST_CASE("spectral shifts") {
    // band-limited field: non-grid shifts are exact on resolved modes, and the
    // unrepresentable Nyquist sine is absent by construction
    BoxGrid box(4, 4, 32);
    std::vector<double> u(static_cast<size_t>(box.n_box()));
    for (long i = 0; i < box.n_box(); ++i) {
        double x = box.x(i);
        u[static_cast<size_t>(i)] = 1.0 + 0.8 * std::cos(2.0 * M_PI * x / 4.0) +
                                    0.3 * std::sin(2.0 * M_PI * 3.0 * x / 4.0) -
                                    0.15 * std::cos(2.0 * M_PI * 7.0 * x / 4.0);
    }

    SUBCASE("shift by the box length is the identity") {
        auto v = shift_field(u, 4.0, 4.0);
        for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(v[i] - u[i]) <= 1e-12);
    }

    SUBCASE("shift by one spacing is the circular index shift") {
        auto v = shift_field(u, box.h(), 4.0);
        for (long i = 0; i < box.n_box(); ++i) {
            long j = (i - 1 + box.n_box()) % box.n_box();
            CHECK(std::abs(v[static_cast<size_t>(i)] - u[static_cast<size_t>(j)]) <= 1e-12);
        }
    }

    SUBCASE("round trip returns the field") {
        auto v = shift_field(shift_field(u, 0.7345, 4.0), -0.7345, 4.0);
        for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(v[i] - u[i]) <= 1e-12);
    }

    SUBCASE("composition law") {
        auto ab = shift_field(shift_field(u, 0.31, 4.0), 1.17, 4.0);
        auto apb = shift_field(u, 1.48, 4.0);
        for (size_t i = 0; i < u.size(); ++i) CHECK(std::abs(ab[i] - apb[i]) <= 1e-12);
    }
}

TEST_CASE("sup-L2 trajectory distance") {
    BoxGrid box(2, 2, 16);
    EvolutionState a, b;
    a.times = {0.5, 1.0};
    b.times = {0.5, 1.0};
    std::vector<double> f0(static_cast<size_t>(box.n_box()), 1.0);
    std::vector<double> f1(static_cast<size_t>(box.n_box()), 2.0);
    a.snapshots = {f0, f1};
    b.snapshots = {f0, f1};

    CHECK(sup_l2_error(a, b, box.h()) == doctest::Approx(0.0));

    // adding a constant c shifts the distance to |c| sqrt(L)
    EvolutionState c = b;
    for (auto& snap : c.snapshots)
        for (auto& v : snap) v += 0.25;
    CHECK(sup_l2_error(a, c, box.h()) ==
          doctest::Approx(0.25 * std::sqrt(2.0)).epsilon(1e-12));

    // translation consistency, on a band-limited field
    std::vector<double> g(static_cast<size_t>(box.n_box()));
    for (long i = 0; i < box.n_box(); ++i) g[static_cast<size_t>(i)] =
        std::cos(M_PI * box.x(i)) + 0.4 * std::sin(2.0 * M_PI * box.x(i));
    EvolutionState ga, gb;
    ga.times = {1.0};
    gb.times = {1.0};
    ga.snapshots = {g};
    gb.snapshots = {shift_field(g, 0.3, 2.0)};
    double base = sup_l2_error(ga, gb, box.h());
    EvolutionState sa, sb;
    sa.times = {1.0};
    sb.times = {1.0};
    sa.snapshots = {shift_field(ga.snapshots[0], 0.77, 2.0)};
    sb.snapshots = {shift_field(gb.snapshots[0], 0.77, 2.0)};
    CHECK(std::abs(sup_l2_error(sa, sb, box.h()) - base) <= 1e-12);

    EvolutionState mismatched = a;
    mismatched.times = {0.5};
    mismatched.snapshots = {f0};
    CHECK_THROWS_AS(sup_l2_error(a, mismatched, box.h()), CheckpointMismatch);
}
