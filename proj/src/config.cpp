#include "nlhom/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nlhom/correctors.hpp"

namespace nlhom {

using nlohmann::json;

namespace {

TrigFactor parse_factor(const json& j) {
    TrigFactor f;
    if (j.is_string()) {
        f.fn = trig_from_name(j.get<std::string>());
        return f;
    }
    f.fn = trig_from_name(j.value("fn", "one"));
    if (j.contains("l")) {
        if (j["l"].is_number_integer()) {
            f.l = {j["l"].get<int>(), 0};
        } else {
            auto v = j["l"].get<std::vector<int>>();
            f.l = {v.size() > 0 ? v[0] : 1, v.size() > 1 ? v[1] : 0};
        }
    }
    return f;
}

json factor_json(const TrigFactor& f) {
    return json{{"fn", trig_name(f.fn)}, {"l", std::vector<int>{f.l[0], f.l[1]}}};
}

int parse_eps_entry(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos || s.substr(0, slash) != "1")
            throw ConfigError("epsilon entries as strings must look like \"1/8\"");
        return std::stoi(s.substr(slash + 1));
    }
    double v = j.get<double>();
    if (v > 1.0) {  // given as q directly
        double q = v;
        if (std::abs(q - std::round(q)) > 1e-9) throw ConfigError("q values must be integers");
        return static_cast<int>(std::round(q));
    }
    if (!(v > 0.0)) throw ConfigError("epsilon must be positive");
    double q = 1.0 / v;
    if (std::abs(q - std::round(q)) > 1e-9 * q)
        throw ConfigError("every epsilon must admit an integer q = 1/eps");
    return static_cast<int>(std::round(q));
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg;

    const json& k = j.at("kernel");
    cfg.kernel.family = family_from_name(k.value("family", "uniform"));
    cfg.kernel.dimension = k.value("dimension", 1);
    cfg.kernel.center = k.value("center", 0.0);
    cfg.kernel.half_width = k.value("half_width", 1.0);
    cfg.kernel.sigma = k.value("sigma", 1.0);
    cfg.kernel.cutoff = k.value("cutoff", 1.0);

    const json& m = j.at("mu");
    cfg.mu.c0 = m.value("c0", 1.0);
    if (m.contains("terms")) {
        for (const auto& t : m["terms"]) {
            CoefficientTerm term;
            term.c = t.at("c").get<double>();
            if (t.contains("xi")) term.xi = parse_factor(t["xi"]);
            if (t.contains("eta")) term.eta = parse_factor(t["eta"]);
            if (t.contains("s")) term.s = parse_factor(t["s"]);
            cfg.mu.terms.push_back(term);
        }
    }

    cfg.alpha = j.value("alpha", 1.0);

    if (j.contains("grid")) {
        cfg.n_cell = j["grid"].value("n_cell", cfg.kernel.dimension == 1 ? 64 : 32);
        cfg.s_samples = j["grid"].value("s_samples", 32);
    } else {
        cfg.n_cell = cfg.kernel.dimension == 1 ? 64 : 32;
    }

    if (j.contains("box")) {
        const json& b = j["box"];
        cfg.box_length = b.value("length", 8);
        if (b.contains("epsilons"))
            for (const auto& e : b["epsilons"]) cfg.eps_q.push_back(parse_eps_entry(e));
        if (b.contains("initial")) {
            const json& ic = b["initial"];
            cfg.initial.type = ic.value("type", "gaussian");
            cfg.initial.width = ic.value("width", 1.0);
            cfg.initial.mode = ic.value("mode", 1);
            cfg.initial.amplitude = ic.value("amplitude", 1.0);
        }
    }

    if (j.contains("time")) {
        const json& t = j["time"];
        cfg.T = t.value("T", 1.0);
        if (t.contains("checkpoints"))
            cfg.checkpoints = t["checkpoints"].get<std::vector<double>>();
        cfg.cfl_fraction = t.value("cfl_fraction", 0.9);
        cfg.dt_scale = t.value("dt_scale", 1.0);
    }
    if (cfg.checkpoints.empty()) cfg.checkpoints = {0.25 * cfg.T, 0.5 * cfg.T, 0.75 * cfg.T, cfg.T};

    if (j.contains("tolerances")) {
        cfg.tol_compat = j["tolerances"].value("compat", 1e-10);
        cfg.tol_solve = j["tolerances"].value("solve", 1e-10);
    }
    if (j.contains("output")) {
        cfg.out_dir = j["output"].value("dir", "out");
        cfg.binary_snapshots = j["output"].value("binary_snapshots", false);
    }
    cfg.seed = j.value("seed", static_cast<std::uint64_t>(12345));
    return cfg;
}

json RunConfig::to_json() const {
    json terms = json::array();
    for (const auto& t : mu.terms)
        terms.push_back(json{{"c", t.c},
                             {"xi", factor_json(t.xi)},
                             {"eta", factor_json(t.eta)},
                             {"s", factor_json(t.s)}});
    json eps = json::array();
    for (int q : eps_q) eps.push_back("1/" + std::to_string(q));

    return json{
        {"kernel",
         {{"family", family_name(kernel.family)},
          {"dimension", kernel.dimension},
          {"center", kernel.center},
          {"half_width", kernel.half_width},
          {"sigma", kernel.sigma},
          {"cutoff", kernel.cutoff}}},
        {"mu", {{"c0", mu.c0}, {"terms", terms}}},
        {"alpha", alpha},
        {"grid", {{"n_cell", n_cell}, {"s_samples", s_samples}}},
        {"box",
         {{"length", box_length},
          {"epsilons", eps},
          {"initial",
           {{"type", initial.type},
            {"width", initial.width},
            {"mode", initial.mode},
            {"amplitude", initial.amplitude}}}}},
        {"time",
         {{"T", T},
          {"checkpoints", checkpoints},
          {"cfl_fraction", cfl_fraction},
          {"dt_scale", dt_scale}}},
        {"tolerances", {{"compat", tol_compat}, {"solve", tol_solve}}},
        {"output", {{"dir", out_dir}, {"binary_snapshots", binary_snapshots}}},
        {"seed", seed}};
}

std::string RunConfig::digest() const {
    std::string dump = to_json().dump();
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoFailure("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    RunConfig cfg = parse_config(j);
    validate_config(cfg);
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    require_valid(cfg.kernel);
    if (!cfg.mu.coercive())
        throw CoercivityViolation("mu_minus = " + std::to_string(cfg.mu.mu_minus()) +
                                  " must be positive");
    corrector_schedule(cfg.alpha);  // throws AlphaOutOfRange
    if (cfg.n_cell < 4) throw ConfigError("n_cell must be >= 4");
    if (cfg.s_samples < 8 || cfg.s_samples % 2 != 0)
        throw ConfigError("s_samples must be even and >= 8");
    if (cfg.box_length < 1) throw ConfigError("box length must be a positive integer");
    for (int q : cfg.eps_q)
        if (q < 1) throw ConfigError("every epsilon must be 1/q with integer q >= 1");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end()))
        throw ConfigError("checkpoints must be ascending");
    for (double tc : cfg.checkpoints)
        if (!(tc > 0.0) || tc > cfg.T + 1e-12)
            throw ConfigError("checkpoints must lie in (0, T]");
    if (!(cfg.cfl_fraction > 0.0) || cfg.cfl_fraction > 1.0)
        throw ConfigError("cfl_fraction must lie in (0, 1]");
    if (!(cfg.dt_scale > 0.0) || cfg.dt_scale > 1.0)
        throw ConfigError("dt_scale must lie in (0, 1]");
    if (cfg.initial.type != "gaussian" && cfg.initial.type != "harmonic")
        throw ConfigError("initial condition type must be gaussian or harmonic");
}

}  // namespace nlhom
