#pragma once

#include <Eigen/Dense>
#include <vector>

#include "nlhom/correctors.hpp"
#include "nlhom/fourier.hpp"

namespace nlhom {

/// Mean/oscillation split of periodic samples: b = sample mean (exact
/// rectangle rule on the periodic grid), beta = samples - b.
struct MeanSplit {
    Eigen::VectorXd b;        // d
    Eigen::MatrixXd beta;     // M x d
};
MeanSplit split_mean(const Eigen::MatrixXd& F_samples);

/// Spectral antiderivative of mean-zero periodic samples, pinned to B(0) = 0.
Eigen::MatrixXd periodic_antiderivative(const Eigen::MatrixXd& beta_samples,
                                        double mean_tol = 1e-12);

/// Moving-frame data: drift vectors b_0..b_k plus the periodic component B_0,
/// evaluating b^eps(t) = sum_j eps^{-1+j(2-alpha)} b_j t + eps^{alpha-1} B_0(t/eps^alpha).
struct DriftDecomposition {
    CorrectorSchedule schedule;
    int M = 0;
    Eigen::MatrixXd b;        // (k+1) x d, row j = b_j
    Eigen::MatrixXd beta0;    // M x d
    Eigen::MatrixXd B0;       // M x d, B0(0) = 0
    std::vector<TrigInterp> beta0_interp;  // per component, used to evaluate B0 anywhere

    /// Full frame evaluation, all alpha regimes in one formula.
    Eigen::VectorXd frame(double eps, double t) const;
    /// Frame without the periodic term (the exactly-linear-in-t part).
    Eigen::VectorXd frame_linear(double eps, double t) const;
    /// B0(s) by trigonometric interpolation, periodic in s.
    Eigen::VectorXd B0_at(double s) const;
    double B0_max_abs() const { return B0.size() ? B0.cwiseAbs().maxCoeff() : 0.0; }
};

DriftDecomposition drift_decomposition(const CorrectorSet& correctors);
Eigen::VectorXd drift_frame(const DriftDecomposition& dec, double eps, double t);

/// theta(s) samples, the period average Theta, its symmetric part and the
/// eigenvalue band of the symmetrized samples. Positive definiteness of every
/// symmetrized sample is asserted.
struct EffectiveTensors {
    std::vector<Eigen::MatrixXd> theta_samples;
    Eigen::MatrixXd Theta;
    Eigen::MatrixXd Theta_sym;
    double lambda_min = 0.0;  // over symmetrized samples
    double lambda_max = 0.0;

    Eigen::MatrixXd theta_sym(int m) const {
        const auto& t = theta_samples[static_cast<size_t>(m)];
        return 0.5 * (t + t.transpose());
    }
};

EffectiveTensors average_theta(const std::vector<Eigen::MatrixXd>& theta_samples);

}  // namespace nlhom
