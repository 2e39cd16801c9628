#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nlhom/grid.hpp"

namespace nlhom {

enum class TrigFn { One, Sin, Cos };

std::string trig_name(TrigFn f);
TrigFn trig_from_name(const std::string& name);

/// One factor of a separable term: 1, sin(2 pi l.x) or cos(2 pi l.x).
struct TrigFactor {
    TrigFn fn = TrigFn::One;
    std::array<int, 2> l = {1, 0};  // integer harmonic (vector in d = 2)

    double eval(double x0, double x1 = 0.0) const {
        switch (fn) {
            case TrigFn::One: return 1.0;
            case TrigFn::Sin: return std::sin(2.0 * M_PI * (l[0] * x0 + l[1] * x1));
            case TrigFn::Cos: return std::cos(2.0 * M_PI * (l[0] * x0 + l[1] * x1));
        }
        return 1.0;
    }
    double amplitude() const { return 1.0; }  // all factors bounded by 1
};

struct CoefficientTerm {
    double c = 0.0;
    TrigFactor xi, eta, s;
};

/// Rate modulation mu(xi, eta, s) = c0 + sum_k c_k phi_k(xi) psi_k(eta) m_k(s).
/// Closed trigonometric form: 1-periodic in every variable and entire in s,
/// with certified bounds mu_minus = c0 - sum|c_k|, mu_plus = c0 + sum|c_k|.
struct CoefficientSpec {
    double c0 = 1.0;
    std::vector<CoefficientTerm> terms;

    double mu_minus() const {
        double s = c0;
        for (const auto& t : terms) s -= std::abs(t.c);
        return s;
    }
    double mu_plus() const {
        double s = c0;
        for (const auto& t : terms) s += std::abs(t.c);
        return s;
    }
    bool coercive() const { return mu_minus() > 0.0; }

    double eval(const Eigen::VectorXd& xi, const Eigen::VectorXd& eta, double s) const {
        double x1 = xi.size() > 1 ? xi(1) : 0.0;
        double e1 = eta.size() > 1 ? eta(1) : 0.0;
        double v = c0;
        for (const auto& t : terms)
            v += t.c * t.xi.eval(xi(0), x1) * t.eta.eval(eta(0), e1) * t.s.eval(s);
        return v;
    }
};

/// Per-grid tables of the separable factors, for O(n^2 K) operator assembly:
/// mu(xi_i, xi_j, s) = c0 + sum_k (c_k m_k(s)) phi_k[i] psi_k[j].
struct CoefficientTables {
    const CoefficientSpec* spec = nullptr;
    TorusGrid grid;
    Eigen::MatrixXd phi;  // n x K
    Eigen::MatrixXd psi;  // n x K

    CoefficientTables() = default;
    CoefficientTables(const CoefficientSpec& mu, const TorusGrid& g);

    /// c_k m_k(s) for every term.
    Eigen::VectorXd s_weights(double s) const;

    double value(long i, long j, const Eigen::VectorXd& sw) const {
        double v = spec->c0;
        for (int k = 0; k < sw.size(); ++k) v += sw(k) * phi(i, k) * psi(j, k);
        return v;
    }
};

}  // namespace nlhom
