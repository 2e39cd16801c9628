#include "nlhom/coefficient.hpp"

namespace nlhom {

std::string trig_name(TrigFn f) {
    switch (f) {
        case TrigFn::One: return "one";
        case TrigFn::Sin: return "sin";
        case TrigFn::Cos: return "cos";
    }
    return "?";
}

TrigFn trig_from_name(const std::string& name) {
    if (name == "one" || name == "1") return TrigFn::One;
    if (name == "sin") return TrigFn::Sin;
    if (name == "cos") return TrigFn::Cos;
    throw ConfigError("unknown trig factor '" + name + "'");
}

CoefficientTables::CoefficientTables(const CoefficientSpec& mu, const TorusGrid& g)
    : spec(&mu), grid(g) {
    const int K = static_cast<int>(mu.terms.size());
    phi.resize(g.n(), K);
    psi.resize(g.n(), K);
    for (long i = 0; i < g.n(); ++i) {
        auto ax = g.axes(i);
        double x0 = g.coord(ax[0]), x1 = g.coord(ax[1]);
        for (int k = 0; k < K; ++k) {
            phi(i, k) = mu.terms[static_cast<size_t>(k)].xi.eval(x0, x1);
            psi(i, k) = mu.terms[static_cast<size_t>(k)].eta.eval(x0, x1);
        }
    }
}

Eigen::VectorXd CoefficientTables::s_weights(double s) const {
    const int K = static_cast<int>(spec->terms.size());
    Eigen::VectorXd sw(K);
    for (int k = 0; k < K; ++k) {
        const auto& t = spec->terms[static_cast<size_t>(k)];
        sw(k) = t.c * t.s.eval(s);
    }
    return sw;
}

}  // namespace nlhom
