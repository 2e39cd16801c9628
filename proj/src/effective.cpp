#include "nlhom/effective.hpp"

#include <cmath>
#include <limits>

namespace nlhom {

MeanSplit split_mean(const Eigen::MatrixXd& F_samples) {
    const long M = F_samples.rows();
    MeanSplit out;
    out.b = F_samples.colwise().sum().transpose() / static_cast<double>(M);
    out.beta = F_samples;
    out.beta.rowwise() -= out.b.transpose();
    return out;
}

Eigen::MatrixXd periodic_antiderivative(const Eigen::MatrixXd& beta_samples, double mean_tol) {
    Eigen::MatrixXd B(beta_samples.rows(), beta_samples.cols());
    for (int c = 0; c < beta_samples.cols(); ++c)
        B.col(c) = periodic_antiderivative_samples(beta_samples.col(c), mean_tol);
    return B;
}

DriftDecomposition drift_decomposition(const CorrectorSet& correctors) {
    const int d = correctors.grid.d;
    const int levels = correctors.schedule.levels();

    DriftDecomposition dec;
    dec.schedule = correctors.schedule;
    dec.M = correctors.ssamples.M;
    dec.b.resize(levels, d);

    MeanSplit f1 = split_mean(correctors.F[0]);
    dec.b.row(0) = f1.b.transpose();
    dec.beta0 = f1.beta;
    dec.B0 = periodic_antiderivative(f1.beta);
    for (int c = 0; c < d; ++c) dec.beta0_interp.emplace_back(dec.beta0.col(c));

    // levels j >= 1 contribute means only; their oscillations stay O(eps) in the frame
    for (int lev = 1; lev < levels; ++lev)
        dec.b.row(lev) = split_mean(correctors.F[static_cast<size_t>(lev)]).b.transpose();
    return dec;
}

Eigen::VectorXd DriftDecomposition::B0_at(double s) const {
    const int d = static_cast<int>(b.cols());
    Eigen::VectorXd out(d);
    double sf = s - std::floor(s);
    for (int c = 0; c < d; ++c) out(c) = beta0_interp[static_cast<size_t>(c)].antiderivative(sf);
    return out;
}

Eigen::VectorXd DriftDecomposition::frame_linear(double eps, double t) const {
    if (!(eps > 0.0)) throw EpsilonNonPositive("eps must be positive");
    const double alpha = schedule.alpha;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(b.cols());
    for (int j = 0; j <= schedule.k; ++j)
        out += std::pow(eps, -1.0 + j * (2.0 - alpha)) * t * b.row(j).transpose();
    return out;
}

Eigen::VectorXd DriftDecomposition::frame(double eps, double t) const {
    const double alpha = schedule.alpha;
    Eigen::VectorXd out = frame_linear(eps, t);
    out += std::pow(eps, alpha - 1.0) * B0_at(t / std::pow(eps, alpha));
    return out;
}

Eigen::VectorXd drift_frame(const DriftDecomposition& dec, double eps, double t) {
    return dec.frame(eps, t);
}

EffectiveTensors average_theta(const std::vector<Eigen::MatrixXd>& theta_samples) {
    if (theta_samples.empty()) throw ConfigError("average_theta needs at least one sample");
    const int d = static_cast<int>(theta_samples.front().rows());

    EffectiveTensors out;
    out.theta_samples = theta_samples;
    out.Theta = Eigen::MatrixXd::Zero(d, d);
    for (const auto& t : theta_samples) out.Theta += t;
    out.Theta /= static_cast<double>(theta_samples.size());
    out.Theta_sym = 0.5 * (out.Theta + out.Theta.transpose());

    out.lambda_min = std::numeric_limits<double>::infinity();
    out.lambda_max = -std::numeric_limits<double>::infinity();
    for (size_t m = 0; m < theta_samples.size(); ++m) {
        Eigen::MatrixXd sym = 0.5 * (theta_samples[m] + theta_samples[m].transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
        double lo = eig.eigenvalues().minCoeff();
        double hi = eig.eigenvalues().maxCoeff();
        out.lambda_min = std::min(out.lambda_min, lo);
        out.lambda_max = std::max(out.lambda_max, hi);
        if (lo <= 0.0)
            throw NotPositiveDefinite("theta_sym(s_" + std::to_string(m) +
                                      ") has eigenvalue " + std::to_string(lo));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(out.Theta_sym);
    if (eig.eigenvalues().minCoeff() <= 0.0)
        throw NotPositiveDefinite("Theta_sym has eigenvalue " +
                                  std::to_string(eig.eigenvalues().minCoeff()));
    return out;
}

}  // namespace nlhom
