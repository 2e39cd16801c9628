#include "nlhom/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace nlhom {

namespace {
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

TrigInterp::TrigInterp(const Eigen::VectorXd& samples) {
    M_ = static_cast<int>(samples.size());
    if (M_ < 2 || M_ % 2 != 0) throw ConfigError("TrigInterp needs an even sample count >= 2");
    const int H = M_ / 2;
    a_ = Eigen::VectorXd::Zero(H + 1);
    b_ = Eigen::VectorXd::Zero(H);  // index k, entries 1..H-1 used
    for (int k = 0; k <= H; ++k) {
        double ca = 0.0;
        for (int m = 0; m < M_; ++m) ca += samples(m) * std::cos(2.0 * M_PI * k * m / M_);
        a_(k) = 2.0 * ca / M_;
    }
    for (int k = 1; k < H; ++k) {
        double cb = 0.0;
        for (int m = 0; m < M_; ++m) cb += samples(m) * std::sin(2.0 * M_PI * k * m / M_);
        b_(k) = 2.0 * cb / M_;
    }
}

double TrigInterp::eval(double s) const {
    const int H = M_ / 2;
    double v = 0.5 * a_(0);
    for (int k = 1; k < H; ++k) {
        double th = 2.0 * M_PI * k * s;
        v += a_(k) * std::cos(th) + b_(k) * std::sin(th);
    }
    v += 0.5 * a_(H) * std::cos(M_PI * M_ * s);
    return v;
}

double TrigInterp::antiderivative(double s) const {
    const int H = M_ / 2;
    double v = 0.5 * a_(0) * s;
    for (int k = 1; k < H; ++k) {
        double w = 2.0 * M_PI * k;
        v += a_(k) * std::sin(w * s) / w + b_(k) * (1.0 - std::cos(w * s)) / w;
    }
    v += 0.5 * a_(H) * std::sin(M_PI * M_ * s) / (M_PI * M_);
    return v;
}

Eigen::MatrixXd spectral_derivative_matrix(int M) {
    if (M < 2 || M % 2 != 0) throw ConfigError("spectral derivative needs an even sample count");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M, M);
    for (int j = 0; j < M; ++j) {
        for (int k = 0; k < M; ++k) {
            if (j == k) continue;
            int diff = j - k;
            double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            D(j, k) = M_PI * sign / std::tan(M_PI * diff / static_cast<double>(M));
        }
    }
    return D;
}

Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples) {
    return spectral_derivative_matrix(static_cast<int>(samples.size())) * samples;
}

Eigen::VectorXd periodic_antiderivative_samples(const Eigen::VectorXd& samples, double mean_tol) {
    const int M = static_cast<int>(samples.size());
    double mean = samples.sum() / M;
    if (std::abs(mean) > mean_tol)
        throw NonZeroMean("periodic antiderivative requires mean-zero samples, got mean " +
                          std::to_string(mean));
    TrigInterp interp(samples);
    Eigen::VectorXd out(M);
    for (int m = 0; m < M; ++m) out(m) = interp.antiderivative(static_cast<double>(m) / M);
    return out;
}

std::vector<std::complex<double>> dft_forward(const std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    std::vector<std::complex<double>> spec(static_cast<size_t>(n / 2 + 1));
    std::vector<double> in(u);
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    return spec;
}

std::vector<double> dft_inverse(const std::vector<std::complex<double>>& spec, int n) {
    if (static_cast<int>(spec.size()) != n / 2 + 1)
        throw ConfigError("dft_inverse: spectrum size does not match n");
    std::vector<std::complex<double>> in(spec);
    std::vector<double> out(static_cast<size_t>(n));
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()), out.data(),
                                    FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(plan);
    }
    for (double& v : out) v /= n;
    return out;
}

}  // namespace nlhom
