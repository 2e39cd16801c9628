#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlhom/effective.hpp"

using namespace nlhom;

namespace {

Eigen::MatrixXd samples_1d(int M, const std::function<double(double)>& f) {
    Eigen::MatrixXd out(M, 1);
    for (int m = 0; m < M; ++m) out(m, 0) = f(static_cast<double>(m) / M);
    return out;
}

DriftDecomposition make_drift(double alpha, const Eigen::MatrixXd& b,
                              const Eigen::MatrixXd& beta0) {
    CorrectorSet set;
    set.schedule = corrector_schedule(alpha);
    set.grid = TorusGrid(1, 8);
    set.ssamples = SSampleSet(static_cast<int>(beta0.rows()));
    for (int lev = 0; lev < set.schedule.levels(); ++lev) {
        Eigen::MatrixXd F = beta0;
        if (lev > 0) F.setZero();
        F.rowwise() += b.row(lev);
        set.F.push_back(F);
    }
    return drift_decomposition(set);
}

}  // namespace

TEST_CASE("split_mean closed forms") {
    const int M = 16;
    auto s1 = split_mean(samples_1d(M, [](double s) { return 2.0 + std::sin(2.0 * M_PI * s); }));
    CHECK(s1.b(0) == doctest::Approx(2.0).epsilon(1e-14));
    for (int m = 0; m < M; ++m)
        CHECK(s1.beta(m, 0) ==
              doctest::Approx(std::sin(2.0 * M_PI * m / M)).epsilon(1e-12));

    auto s2 = split_mean(samples_1d(M, [](double) { return 3.25; }));
    CHECK(s2.beta.cwiseAbs().maxCoeff() <= 1e-14);

    auto s3 = split_mean(samples_1d(M, [](double s) { return std::cos(4.0 * M_PI * s); }));
    CHECK(std::abs(s3.b(0)) <= 1e-14);
}

TEST_CASE("periodic antiderivative closed forms") {
    const int M = 16;
    auto beta = samples_1d(M, [](double s) { return std::sin(2.0 * M_PI * s); });
    auto B = periodic_antiderivative(beta);
    for (int m = 0; m < M; ++m) {
        double s = static_cast<double>(m) / M;
        CHECK(std::abs(B(m, 0) - (1.0 - std::cos(2.0 * M_PI * s)) / (2.0 * M_PI)) <= 1e-12);
    }
    CHECK(std::abs(B(0, 0)) <= 1e-15);

    auto zero = periodic_antiderivative(Eigen::MatrixXd::Zero(M, 1));
    CHECK(zero.cwiseAbs().maxCoeff() <= 1e-15);

    auto half = samples_1d(M, [](double s) { return 0.5 * std::sin(2.0 * M_PI * s); });
    auto Bh = periodic_antiderivative(half);
    for (int m = 0; m < M; ++m) {
        double s = static_cast<double>(m) / M;
        CHECK(std::abs(Bh(m, 0) - (1.0 - std::cos(2.0 * M_PI * s)) / (4.0 * M_PI)) <= 1e-12);
    }

    CHECK_THROWS_AS(periodic_antiderivative(samples_1d(M, [](double) { return 1.0; })),
                    NonZeroMean);
}

TEST_CASE("antiderivative round-trips through the spectral derivative") {
    const int M = 32;
    auto beta = samples_1d(M, [](double s) {
        return std::sin(2.0 * M_PI * s) + 0.37 * std::cos(6.0 * M_PI * s) -
               0.11 * std::sin(8.0 * M_PI * s);
    });
    auto B = periodic_antiderivative(beta);
    Eigen::VectorXd back = spectral_derivative(B.col(0));
    CHECK((back - beta.col(0)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("average_theta statistics and failure mode") {
    SUBCASE("time-modulated scalar averages to the mean") {
        std::vector<Eigen::MatrixXd> th;
        const int M = 16;
        for (int m = 0; m < M; ++m) {
            Eigen::MatrixXd t(1, 1);
            t(0, 0) = (1.0 + 0.5 * std::sin(2.0 * M_PI * m / M)) / 6.0;
            th.push_back(t);
        }
        auto eff = average_theta(th);
        CHECK(eff.Theta(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    }

    SUBCASE("constant matrix is returned unchanged") {
        Eigen::MatrixXd t(1, 1);
        t(0, 0) = 0.42;
        auto eff = average_theta({t, t, t});
        CHECK(eff.Theta(0, 0) == doctest::Approx(0.42));
        CHECK(eff.lambda_min == doctest::Approx(0.42));
    }

    SUBCASE("2-D diagonal keeps its eigenvalue band") {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 2);
        t(0, 0) = 1.0 / 6.0;
        t(1, 1) = 1.0 / 12.0;
        auto eff = average_theta({t});
        CHECK(eff.Theta(0, 0) == doctest::Approx(1.0 / 6.0));
        CHECK(eff.Theta(1, 1) == doctest::Approx(1.0 / 12.0));
        CHECK(eff.lambda_min == doctest::Approx(1.0 / 12.0));
        CHECK(eff.lambda_max == doctest::Approx(1.0 / 6.0));
    }

    SUBCASE("losing definiteness is a hard failure") {
        Eigen::MatrixXd t(1, 1);
        t(0, 0) = -0.1;
        CHECK_THROWS_AS(average_theta({t}), NotPositiveDefinite);
    }
}

TEST_CASE("drift frame evaluation") {
    SUBCASE("k = 0 without oscillation is a pure linear drift") {
        Eigen::MatrixXd b(1, 1);
        b(0, 0) = 1.0;
        auto dec = make_drift(0.5, b, Eigen::MatrixXd::Zero(16, 1));
        CHECK(dec.frame(0.1, 0.2)(0) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(std::abs(dec.frame(0.1, 0.0)(0)) <= 1e-15);
    }

    SUBCASE("alpha = 1 regime formula") {
        // b0 = 1, b1 = 0.3, beta0 = 0.5 sin(2 pi s) so B0 = (1-cos)/4pi
        Eigen::MatrixXd b(2, 1);
        b(0, 0) = 1.0;
        b(1, 0) = 0.3;
        auto beta0 = samples_1d(64, [](double s) { return 0.5 * std::sin(2.0 * M_PI * s); });
        auto dec = make_drift(1.0, b, beta0);
        double eps = 0.1, t = 0.05;
        double expect = t / eps + 0.3 * t + (1.0 - std::cos(2.0 * M_PI * 0.5)) / (4.0 * M_PI);
        CHECK(dec.frame(eps, t)(0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(drift_frame(dec, eps, t)(0) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(dec.frame(eps, 0.0)(0)) <= 1e-14);
    }

    SUBCASE("frame minus the periodic term is exactly linear in t") {
        Eigen::MatrixXd b(3, 1);
        b << 0.7, -0.2, 0.05;
        auto beta0 = samples_1d(32, [](double s) { return std::sin(2.0 * M_PI * s); });
        auto dec = make_drift(1.5, b, beta0);
        double eps = 0.125;
        auto lin = [&](double t) { return dec.frame_linear(eps, t)(0); };
        double l1 = lin(0.3), l2 = lin(0.6), l3 = lin(0.9);
        CHECK(std::abs((l2 - l1) - (l3 - l2)) <= 1e-12 * std::abs(l3));
        // and the full frame differs from the linear part by at most eps^(a-1) max|B0|
        double gap = std::abs(dec.frame(eps, 0.37)(0) - dec.frame_linear(eps, 0.37)(0));
        CHECK(gap <= std::pow(eps, 0.5) * dec.B0_max_abs() + 1e-14);
    }

    SUBCASE("nonpositive eps is rejected") {
        Eigen::MatrixXd b(1, 1);
        b(0, 0) = 1.0;
        auto dec = make_drift(0.5, b, Eigen::MatrixXd::Zero(16, 1));
        CHECK_THROWS_AS(dec.frame(0.0, 1.0), EpsilonNonPositive);
        CHECK_THROWS_AS(dec.frame(-0.1, 1.0), EpsilonNonPositive);
    }
}

TEST_CASE("B0 interpolation matches its samples and stays periodic") {
    auto beta0 = samples_1d(32, [](double s) {
        return std::sin(2.0 * M_PI * s) - 0.25 * std::cos(4.0 * M_PI * s);
    });
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(1, 1);
    auto dec = make_drift(0.5, b, beta0);
    for (int m = 0; m < 32; ++m) {
        double s = static_cast<double>(m) / 32;
        CHECK(std::abs(dec.B0_at(s)(0) - dec.B0(m, 0)) <= 1e-12);
        CHECK(std::abs(dec.B0_at(s + 7.0)(0) - dec.B0(m, 0)) <= 1e-12);
    }
}
