#include "stefanlab/config.hpp"

#include <fstream>
#include <set>

namespace stefanlab {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& node, const std::set<std::string>& allowed,
                         const std::string& path) {
    for (auto it = node.begin(); it != node.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error("unknown key '" + path + it.key() + "'");
}

double get_number(const json& node, const std::string& key, const std::string& path,
                  double fallback, bool required = false) {
    if (!node.contains(key)) {
        if (required) throw config_error("missing required key '" + path + key + "'");
        return fallback;
    }
    if (!node[key].is_number())
        throw config_error("key '" + path + key + "' must be a number");
    return node[key].get<double>();
}

InitialProfileSpec parse_profile(const json& node, const std::string& path) {
    if (!node.is_object()) throw config_error("'" + path + "' must be an object");
    InitialProfileSpec spec;
    const std::string type = node.value("type", "linear");
    if (type == "linear") {
        reject_unknown_keys(node, {"type", "amplitude"}, path + ".");
        spec.kind = InitialProfileSpec::Kind::Linear;
        spec.amplitude = get_number(node, "amplitude", path + ".", 1.0);
        if (!(spec.amplitude > 0.0))
            throw config_error("'" + path + ".amplitude' must be positive");
    } else if (type == "samples") {
        reject_unknown_keys(node, {"type", "x", "phi", "lipschitz_bound"}, path + ".");
        spec.kind = InitialProfileSpec::Kind::Samples;
        if (!node.contains("x") || !node.contains("phi"))
            throw config_error("'" + path + "' samples profile needs 'x' and 'phi'");
        spec.samples.x = node["x"].get<std::vector<double>>();
        spec.samples.phi = node["phi"].get<std::vector<double>>();
        spec.samples.lipschitz_bound = get_number(node, "lipschitz_bound", path + ".", 0.0, true);
    } else {
        throw config_error("'" + path + ".type' must be 'linear' or 'samples'");
    }
    return spec;
}

BcMode parse_bc(const json& node, const std::string& path) {
    if (!node.is_object()) throw config_error("'" + path + "' must be an object");
    reject_unknown_keys(node, {"type", "u0"}, path + ".");
    const std::string type = node.value("type", "nonlinear_flux");
    if (type == "nonlinear_flux") return BcMode::nonlinear_flux();
    if (type == "dirichlet") return BcMode::dirichlet(get_number(node, "u0", path + ".", 0.0, true));
    if (type == "neumann_zero") return BcMode::neumann_zero();
    throw config_error("'" + path + ".type' must be one of nonlinear_flux|dirichlet|neumann_zero");
}

}  // namespace

RunConfig parse_config(const json& document) {
    if (!document.is_object()) throw config_error("config document must be an object");
    reject_unknown_keys(document, {"problem", "numerics", "classifier", "output"}, "");
    if (!document.contains("problem")) throw config_error("missing required key 'problem'");

    RunConfig cfg;
    {
        const json& p = document["problem"];
        reject_unknown_keys(p, {"p", "s0", "lambda", "profile", "bc"}, "problem.");
        cfg.problem.p = get_number(p, "p", "problem.", 3.0, true);
        if (!(cfg.problem.p > 1.0)) throw config_error("'problem.p' must exceed 1");
        cfg.problem.s0 = get_number(p, "s0", "problem.", 1.0, true);
        if (!(cfg.problem.s0 > 0.0)) throw config_error("'problem.s0' must be positive");
        cfg.problem.lambda = get_number(p, "lambda", "problem.", 1.0, true);
        if (cfg.problem.lambda < 0.0) throw config_error("'problem.lambda' must be nonnegative");
        if (p.contains("profile")) cfg.problem.profile = parse_profile(p["profile"], "problem.profile");
        if (p.contains("bc")) cfg.problem.bc = parse_bc(p["bc"], "problem.bc");
    }

    NumericsConfig& nm = cfg.numerics;
    nm.horizon = 1.0;
    if (document.contains("numerics")) {
        const json& n = document["numerics"];
        reject_unknown_keys(n,
                            {"N", "theta", "dt_max", "dt_min", "u_max", "horizon", "c_safety",
                             "c_bu", "u_floor", "record_interval", "checkpoint_times",
                             "stop_on_certificate", "max_retries", "advection", "front_coupling",
                             "picard_max_sweeps", "picard_tol", "newton_tol", "newton_max_iters"},
                            "numerics.");
        nm.n = static_cast<int>(get_number(n, "N", "numerics.", 400));
        if (nm.n < 16) throw config_error("'numerics.N' must be at least 16");
        nm.theta = get_number(n, "theta", "numerics.", 1.0);
        if (nm.theta < 0.5 || nm.theta > 1.0)
            throw config_error("'numerics.theta' must lie in [0.5, 1]");
        nm.dt_max = get_number(n, "dt_max", "numerics.", 0.0);
        nm.dt_min = get_number(n, "dt_min", "numerics.", 1e-12);
        nm.u_max = get_number(n, "u_max", "numerics.", 1e6);
        nm.horizon = get_number(n, "horizon", "numerics.", 1.0);
        if (!(nm.horizon > 0.0)) throw config_error("'numerics.horizon' must be positive");
        nm.c_safety = get_number(n, "c_safety", "numerics.", 0.5);
        nm.c_bu = get_number(n, "c_bu", "numerics.", 0.1);
        nm.u_floor = get_number(n, "u_floor", "numerics.", 1e-8);
        nm.record_interval = get_number(n, "record_interval", "numerics.", 0.01);
        nm.max_retries = static_cast<int>(get_number(n, "max_retries", "numerics.", 20));
        if (n.contains("checkpoint_times"))
            nm.checkpoint_times = n["checkpoint_times"].get<std::vector<double>>();
        if (n.contains("stop_on_certificate")) {
            if (!n["stop_on_certificate"].is_boolean())
                throw config_error("'numerics.stop_on_certificate' must be a boolean");
            nm.stop_on_certificate = n["stop_on_certificate"].get<bool>();
        }
        if (n.contains("advection")) {
            const std::string a = n["advection"].get<std::string>();
            if (a == "upwind") nm.advection = AdvectionScheme::Upwind;
            else if (a == "centered") nm.advection = AdvectionScheme::Centered;
            else throw config_error("'numerics.advection' must be 'upwind' or 'centered'");
        }
        if (n.contains("front_coupling")) {
            const std::string f = n["front_coupling"].get<std::string>();
            if (f == "picard") nm.front_coupling = FrontCoupling::Picard;
            else if (f == "monolithic_newton") nm.front_coupling = FrontCoupling::MonolithicNewton;
            else throw config_error("'numerics.front_coupling' must be 'picard' or 'monolithic_newton'");
        }
        nm.picard_max_sweeps = static_cast<int>(get_number(n, "picard_max_sweeps", "numerics.", 25));
        nm.picard_tol = get_number(n, "picard_tol", "numerics.", 1e-10);
        nm.newton_tol = get_number(n, "newton_tol", "numerics.", 1e-12);
        nm.newton_max_iters = static_cast<int>(get_number(n, "newton_max_iters", "numerics.", 50));
    }
    const double s0sq = cfg.problem.s0 * cfg.problem.s0;
    if (nm.dt_max <= 0.0) nm.dt_max = 1e-3 * s0sq;
    if (!(nm.dt_min < nm.dt_max)) throw config_error("'numerics.dt_min' must be below dt_max");

    if (document.contains("classifier")) {
        const json& c = document["classifier"];
        reject_unknown_keys(c, {"rate_min", "front_plateau_tol", "front_growth_min", "min_records"},
                            "classifier.");
        cfg.classifier.rate_min = get_number(c, "rate_min", "classifier.", 1e-2);
        cfg.classifier.front_plateau_tol = get_number(c, "front_plateau_tol", "classifier.", 0.01);
        cfg.classifier.front_growth_min = get_number(c, "front_growth_min", "classifier.", 0.2);
        cfg.classifier.min_records =
            static_cast<std::size_t>(get_number(c, "min_records", "classifier.", 50));
    }

    if (document.contains("output")) {
        const json& o = document["output"];
        reject_unknown_keys(o, {"csv_path", "json_path", "checkpoint_dir"}, "output.");
        cfg.output.csv_path = o.value("csv_path", cfg.output.csv_path);
        cfg.output.json_path = o.value("json_path", cfg.output.json_path);
        cfg.output.checkpoint_dir = o.value("checkpoint_dir", cfg.output.checkpoint_dir);
    }

    cfg.problem.validate(false);
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
    return parse_config(doc);
}

nlohmann::json echo_config(const RunConfig& cfg) {
    json profile;
    if (cfg.problem.profile.kind == InitialProfileSpec::Kind::Linear) {
        profile = {{"type", "linear"}, {"amplitude", cfg.problem.profile.amplitude}};
    } else {
        profile = {{"type", "samples"},
                   {"x", cfg.problem.profile.samples.x},
                   {"phi", cfg.problem.profile.samples.phi},
                   {"lipschitz_bound", cfg.problem.profile.samples.lipschitz_bound}};
    }
    json bc;
    switch (cfg.problem.bc.kind) {
        case BcMode::Kind::NonlinearFlux: bc = {{"type", "nonlinear_flux"}}; break;
        case BcMode::Kind::DirichletConstant:
            bc = {{"type", "dirichlet"}, {"u0", cfg.problem.bc.u0}};
            break;
        case BcMode::Kind::NeumannZero: bc = {{"type", "neumann_zero"}}; break;
    }
    return {
        {"problem",
         {{"p", cfg.problem.p},
          {"s0", cfg.problem.s0},
          {"lambda", cfg.problem.lambda},
          {"profile", profile},
          {"bc", bc}}},
        {"numerics",
         {{"N", cfg.numerics.n},
          {"theta", cfg.numerics.theta},
          {"dt_max", cfg.numerics.dt_max},
          {"dt_min", cfg.numerics.dt_min},
          {"u_max", cfg.numerics.u_max},
          {"horizon", cfg.numerics.horizon},
          {"c_safety", cfg.numerics.c_safety},
          {"c_bu", cfg.numerics.c_bu},
          {"u_floor", cfg.numerics.u_floor},
          {"record_interval", cfg.numerics.record_interval},
          {"checkpoint_times", cfg.numerics.checkpoint_times},
          {"stop_on_certificate", cfg.numerics.stop_on_certificate},
          {"max_retries", cfg.numerics.max_retries},
          {"advection",
           cfg.numerics.advection == AdvectionScheme::Upwind ? "upwind" : "centered"},
          {"front_coupling", cfg.numerics.front_coupling == FrontCoupling::Picard
                                 ? "picard"
                                 : "monolithic_newton"},
          {"picard_max_sweeps", cfg.numerics.picard_max_sweeps},
          {"picard_tol", cfg.numerics.picard_tol},
          {"newton_tol", cfg.numerics.newton_tol},
          {"newton_max_iters", cfg.numerics.newton_max_iters}}},
        {"classifier",
         {{"rate_min", cfg.classifier.rate_min},
          {"front_plateau_tol", cfg.classifier.front_plateau_tol},
          {"front_growth_min", cfg.classifier.front_growth_min},
          {"min_records", cfg.classifier.min_records}}},
        {"output",
         {{"csv_path", cfg.output.csv_path},
          {"json_path", cfg.output.json_path},
          {"checkpoint_dir", cfg.output.checkpoint_dir}}}};
}

}  // namespace stefanlab
