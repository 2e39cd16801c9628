#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "nlhom/errors.hpp"

namespace nlhom {

/// Trigonometric interpolant of M uniform samples of a real 1-periodic function
/// (symmetric Nyquist convention: the top mode enters as a pure cosine).
class TrigInterp {
public:
    TrigInterp() = default;
    explicit TrigInterp(const Eigen::VectorXd& samples);

    double eval(double s) const;

    /// Exact antiderivative of the interpolant, integral from 0 to s.
    /// Requires the sample mean only for the linear part; for mean-zero data
    /// the result is 1-periodic.
    double antiderivative(double s) const;

    double mean() const { return 0.5 * a_(0); }
    int samples() const { return M_; }

private:
    int M_ = 0;
    Eigen::VectorXd a_;  // cosine coefficients, k = 0..M/2
    Eigen::VectorXd b_;  // sine coefficients,   k = 1..M/2-1
};

/// Spectral differentiation matrix for M uniform samples on a period-1 grid;
/// exact for trigonometric polynomials of degree < M/2.
Eigen::MatrixXd spectral_derivative_matrix(int M);

/// Nodal spectral derivative of one period of samples.
Eigen::VectorXd spectral_derivative(const Eigen::VectorXd& samples);

/// Nodal antiderivative with value 0 at s = 0; input must have mean below tol.
Eigen::VectorXd periodic_antiderivative_samples(const Eigen::VectorXd& samples,
                                                double mean_tol = 1e-12);

/// Real 1-D DFT pair (FFTW-backed, any size, plan access serialized).
/// Spectrum layout: ck[k], k = 0..n/2 for even n (half-complex).
std::vector<std::complex<double>> dft_forward(const std::vector<double>& u);
std::vector<double> dft_inverse(const std::vector<std::complex<double>>& spec, int n);

}  // namespace nlhom
