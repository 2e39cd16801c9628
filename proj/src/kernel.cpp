#include "nlhom/kernel.hpp"

#include <cmath>

namespace nlhom {

namespace {
constexpr double kJumpTol = 1e-12;

double erf_cdf_width(double r, double sigma) {
    // integral of the unit gaussian density over [-r, r]
    return std::erf(r / (sigma * std::sqrt(2.0)));
}
}  // namespace

std::string family_name(KernelFamily f) {
    switch (f) {
        case KernelFamily::Uniform: return "uniform";
        case KernelFamily::Triangular: return "triangular";
        case KernelFamily::TruncatedGaussian: return "truncated-gaussian";
    }
    return "?";
}

KernelFamily family_from_name(const std::string& name) {
    if (name == "uniform") return KernelFamily::Uniform;
    if (name == "triangular") return KernelFamily::Triangular;
    if (name == "truncated-gaussian" || name == "gaussian") return KernelFamily::TruncatedGaussian;
    throw ConfigError("unknown kernel family '" + name + "'");
}

double KernelSpec::support_radius() const {
    switch (family) {
        case KernelFamily::Uniform:
        case KernelFamily::Triangular: return std::abs(center) + half_width;
        case KernelFamily::TruncatedGaussian: return cutoff;
    }
    return 0.0;
}

double KernelSpec::density1d(double z) const {
    switch (family) {
        case KernelFamily::Uniform: {
            double u = std::abs(z - center);
            double h = 0.5 / half_width;
            if (u < half_width - kJumpTol) return h;
            if (u <= half_width + kJumpTol) return 0.5 * h;  // jump midpoint
            return 0.0;
        }
        case KernelFamily::Triangular: {
            double u = std::abs(z - center);
            if (u >= half_width) return 0.0;
            return (1.0 - u / half_width) / half_width;
        }
        case KernelFamily::TruncatedGaussian: {
            double u = std::abs(z);
            double norm = sigma * std::sqrt(2.0 * M_PI) * erf_cdf_width(cutoff, sigma);
            double g = std::exp(-0.5 * z * z / (sigma * sigma)) / norm;
            if (u < cutoff - kJumpTol) return g;
            if (u <= cutoff + kJumpTol) return 0.5 * g;  // jump midpoint
            return 0.0;
        }
    }
    return 0.0;
}

double KernelSpec::mass1d() const { return 1.0; }

double KernelSpec::m1_1d() const {
    switch (family) {
        case KernelFamily::Uniform:
        case KernelFamily::Triangular: return center;
        case KernelFamily::TruncatedGaussian: return 0.0;
    }
    return 0.0;
}

double KernelSpec::m2_1d() const {
    switch (family) {
        case KernelFamily::Uniform: return center * center + half_width * half_width / 3.0;
        case KernelFamily::Triangular: return center * center + half_width * half_width / 6.0;
        case KernelFamily::TruncatedGaussian: {
            // variance of the renormalized truncation of N(0, sigma^2) to [-r, r]
            double r = cutoff / sigma;
            double phi = std::exp(-0.5 * r * r) / std::sqrt(2.0 * M_PI);
            double z = erf_cdf_width(cutoff, sigma);
            return sigma * sigma * (1.0 - 2.0 * r * phi / z);
        }
    }
    return 0.0;
}

Eigen::VectorXd KernelSpec::moment1() const {
    Eigen::VectorXd m(dimension);
    m.setConstant(m1_1d());
    return m;
}

Eigen::MatrixXd KernelSpec::moment2() const {
    Eigen::MatrixXd m(dimension, dimension);
    double m1 = m1_1d(), m2 = m2_1d();
    for (int i = 0; i < dimension; ++i)
        for (int j = 0; j < dimension; ++j) m(i, j) = (i == j) ? m2 : m1 * m1;
    return m;
}

KernelValidationReport validate_kernel(const KernelSpec& spec) {
    KernelValidationReport rep;
    rep.mass = 1.0;
    rep.m1 = spec.moment1();
    rep.m2 = spec.moment2();

    if (spec.dimension < 1 || spec.dimension > 2) {
        rep.ok = false;
        rep.violations.push_back("dimension must be 1 or 2");
    }
    switch (spec.family) {
        case KernelFamily::Uniform:
        case KernelFamily::Triangular:
            if (!(spec.half_width > 0.0)) {
                rep.ok = false;
                rep.violations.push_back("NegativeDensity: half-width must be positive");
            }
            break;
        case KernelFamily::TruncatedGaussian:
            if (!(spec.sigma > 0.0) || !(spec.cutoff > 0.0)) {
                rep.ok = false;
                rep.violations.push_back("NegativeDensity: sigma and cutoff must be positive");
            }
            break;
    }
    double r = spec.support_radius();
    if (rep.ok && (!(r > 0.0) || !std::isfinite(r))) {
        rep.ok = false;
        rep.violations.push_back("UnboundedSupport: support radius must be finite and positive");
    }
    return rep;
}

void require_valid(const KernelSpec& spec) {
    auto rep = validate_kernel(spec);
    if (rep.ok) return;
    const std::string msg = rep.violations.empty() ? "invalid kernel" : rep.violations.front();
    auto strip = [&](const char* tag) {
        return msg.substr(msg.find(tag) + std::string(tag).size() + 2);
    };
    if (msg.find("UnboundedSupport") != std::string::npos)
        throw UnboundedSupport(strip("UnboundedSupport"));
    if (msg.find("NegativeDensity") != std::string::npos)
        throw NegativeDensity(strip("NegativeDensity"));
    if (msg.find("NonUnitMass") != std::string::npos) throw NonUnitMass(strip("NonUnitMass"));
    throw ConfigError(msg);
}

double DiscreteKernel::disc_mass1d() const {
    double s = 0.0;
    for (double v : values1d) s += v;
    return s * w1d();
}

double DiscreteKernel::disc_m1_1d() const {
    double s = 0.0;
    for (int l = lmin; l <= lmax; ++l) s += z(l) * value1d(l);
    return s * w1d();
}

double DiscreteKernel::disc_m2_1d() const {
    double s = 0.0;
    for (int l = lmin; l <= lmax; ++l) s += z(l) * z(l) * value1d(l);
    return s * w1d();
}

DiscreteKernel discretize_kernel(const KernelSpec& spec, int N) {
    require_valid(spec);
    if (N < 4) throw ConfigError("kernel resolution must be >= 4");

    DiscreteKernel dk;
    dk.dimension = spec.dimension;
    dk.N = N;
    double r = spec.support_radius();
    dk.lmin = static_cast<int>(std::floor(-r * N)) - 1;
    dk.lmax = static_cast<int>(std::ceil(r * N)) + 1;
    dk.values1d.assign(static_cast<size_t>(dk.lmax - dk.lmin + 1), 0.0);

    double raw_mass = 0.0;
    for (int l = dk.lmin; l <= dk.lmax; ++l) {
        double v = spec.density1d(dk.z(l));
        dk.values1d[static_cast<size_t>(l - dk.lmin)] = v;
        raw_mass += v;
    }
    raw_mass *= dk.w1d();
    if (!(raw_mass > 0.0)) throw NonUnitMass("discrete kernel mass vanished at this resolution");
    // renormalize so the discrete 1-D mass is exactly the analytic unit mass
    for (double& v : dk.values1d) v /= raw_mass;
    return dk;
}

PeriodizedKernel periodize(const DiscreteKernel& dk, int order) {
    if (order < 0 || order > 2) throw ConfigError("periodized kernel order must be 0, 1 or 2");
    const int d = dk.dimension;
    TorusGrid grid(d, dk.N);
    const int ncomp = order == 0 ? 1 : (order == 1 ? d : d * d);

    PeriodizedKernel pk;
    pk.order = order;
    pk.grid = grid;
    pk.values = Eigen::MatrixXd::Zero(grid.n(), ncomp);

    // lattice translations covering the (renormalized) support
    const int nmin = static_cast<int>(std::floor(static_cast<double>(dk.lmin) / dk.N)) - 1;
    const int nmax = static_cast<int>(std::ceil(static_cast<double>(dk.lmax) / dk.N)) + 1;

    for (long i = 0; i < grid.n(); ++i) {
        auto ax = grid.axes(i);
        if (d == 1) {
            for (int n = nmin; n <= nmax; ++n) {
                int l = ax[0] + n * dk.N;
                double a = dk.value1d(l);
                if (a == 0.0) continue;
                double zz = dk.z(l);
                if (order == 0)
                    pk.values(i, 0) += a;
                else if (order == 1)
                    pk.values(i, 0) += zz * a;
                else
                    pk.values(i, 0) += zz * zz * a;
            }
        } else {
            for (int n0 = nmin; n0 <= nmax; ++n0) {
                int l0 = ax[0] + n0 * dk.N;
                double a0 = dk.value1d(l0);
                if (a0 == 0.0) continue;
                double z0 = dk.z(l0);
                for (int n1 = nmin; n1 <= nmax; ++n1) {
                    int l1 = ax[1] + n1 * dk.N;
                    double a1 = dk.value1d(l1);
                    if (a1 == 0.0) continue;
                    double z1 = dk.z(l1);
                    double a = a0 * a1;
                    if (order == 0) {
                        pk.values(i, 0) += a;
                    } else if (order == 1) {
                        pk.values(i, 0) += z0 * a;
                        pk.values(i, 1) += z1 * a;
                    } else {
                        pk.values(i, 0) += z0 * z0 * a;
                        pk.values(i, 1) += z0 * z1 * a;
                        pk.values(i, 2) += z1 * z0 * a;
                        pk.values(i, 3) += z1 * z1 * a;
                    }
                }
            }
        }
    }
    return pk;
}

PeriodizedKernel periodized_moment_kernel(const KernelSpec& spec, int N, int order) {
    return periodize(discretize_kernel(spec, N), order);
}

Eigen::VectorXd kernel_moment(const KernelSpec& spec, int order, bool discrete, int N) {
    if (order < 0 || order > 2) throw ConfigError("kernel moment order must be 0, 1 or 2");
    const int d = spec.dimension;
    if (!discrete) {
        if (order == 0) return Eigen::VectorXd::Constant(1, 1.0);
        if (order == 1) return spec.moment1();
        Eigen::MatrixXd m2 = spec.moment2();
        return Eigen::Map<Eigen::VectorXd>(m2.data(), d * d);
    }
    DiscreteKernel dk = discretize_kernel(spec, N);
    double mass = dk.disc_mass1d(), m1 = dk.disc_m1_1d(), m2 = dk.disc_m2_1d();
    if (order == 0) {
        double m = 1.0;
        for (int k = 0; k < d; ++k) m *= mass;
        return Eigen::VectorXd::Constant(1, m);
    }
    if (order == 1) return Eigen::VectorXd::Constant(d, m1);
    Eigen::VectorXd out(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i * d + j) = (i == j) ? m2 : m1 * m1;
    return out;
}

}  // namespace nlhom
