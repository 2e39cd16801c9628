#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "nlhom/grid.hpp"

namespace nlhom {

enum class KernelFamily { Uniform, Triangular, TruncatedGaussian };

std::string family_name(KernelFamily f);
KernelFamily family_from_name(const std::string& name);

/// Jump-size density a(z). Compact support, unit mass by construction;
/// product of identical 1-D factors in d = 2.
struct KernelSpec {
    KernelFamily family = KernelFamily::Uniform;
    int dimension = 1;
    double center = 0.0;      // uniform / triangular
    double half_width = 1.0;  // uniform / triangular
    double sigma = 1.0;       // truncated gaussian
    double cutoff = 1.0;      // truncated gaussian

    /// Support radius r_a of the 1-D factor (sup-norm radius in d = 2).
    double support_radius() const;

    /// 1-D factor density. Nodes landing exactly on a jump take the midpoint
    /// value, so lattice sums keep the odd/even parity of the family.
    double density1d(double z) const;

    /// Analytic 1-D factor moments.
    double mass1d() const;
    double m1_1d() const;
    double m2_1d() const;

    /// Analytic moments of the full d-dimensional density.
    Eigen::VectorXd moment1() const;
    Eigen::MatrixXd moment2() const;
};

struct KernelValidationReport {
    bool ok = true;
    double mass = 0.0;
    Eigen::VectorXd m1;
    Eigen::MatrixXd m2;
    std::vector<std::string> violations;
};

KernelValidationReport validate_kernel(const KernelSpec& spec);
void require_valid(const KernelSpec& spec);  // throws typed errors on violation

/// Kernel sampled on the z-lattice z_l = l/N with per-axis renormalized values
/// (discrete 1-D mass exactly 1). This is the single z-quadrature shared by
/// the cell and box modules.
struct DiscreteKernel {
    int dimension = 1;
    int N = 64;
    int lmin = 0, lmax = 0;        // per-axis offset range with a(z_l) possibly nonzero
    std::vector<double> values1d;  // renormalized samples, index l - lmin

    double w1d() const { return 1.0 / N; }
    double value1d(int l) const {
        return (l < lmin || l > lmax) ? 0.0 : values1d[static_cast<size_t>(l - lmin)];
    }
    double z(int l) const { return static_cast<double>(l) / N; }

    /// Discrete moments of the 1-D factor under the renormalized weights.
    double disc_mass1d() const;
    double disc_m1_1d() const;
    double disc_m2_1d() const;
};

DiscreteKernel discretize_kernel(const KernelSpec& spec, int N);

/// Lattice fold hat{a}_q(z) = sum_n (z+n)^{(x)q} a(z+n) sampled at torus nodes.
/// Component count 1, d or d^2; the fold is an exact finite sum.
struct PeriodizedKernel {
    int order = 0;
    TorusGrid grid;
    Eigen::MatrixXd values;  // n x ncomp

    int ncomp() const { return static_cast<int>(values.cols()); }
    Eigen::VectorXd torus_mean() const { return values.colwise().sum() * grid.weight(); }
};

PeriodizedKernel periodize(const DiscreteKernel& dk, int order);
PeriodizedKernel periodized_moment_kernel(const KernelSpec& spec, int N, int order);

/// Moment of given order, analytic or under the discrete renormalized quadrature.
/// Returns 1, d or d^2 values (row-major for order 2).
Eigen::VectorXd kernel_moment(const KernelSpec& spec, int order, bool discrete, int N);

}  // namespace nlhom
