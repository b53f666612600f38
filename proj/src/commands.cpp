#include "stefanlab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "stefanlab/mms.hpp"
#include "stefanlab/reference.hpp"
#include "stefanlab/solver.hpp"

namespace stefanlab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

int log_level() {
    static int level = [] {
        const char* env = std::getenv("STEFANLAB_LOG");
        if (!env) return 1;
        const std::string s(env);
        if (s == "error") return 0;
        if (s == "debug") return 2;
        return 1;
    }();
    return level;
}

void log_info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[stefanlab] " << msg << "\n";
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

double warmup_time(const RunConfig& cfg) { return 10.0 * cfg.numerics.dt_max; }

double max_mass_residual(const RunConfig& cfg, const Trajectory& traj) {
    const double t_warmup = warmup_time(cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.records.size(); ++k)
        if (traj.records[k].t >= t_warmup)
            worst = std::max(worst, mass_balance_residual(traj, k));
    return worst;
}

double max_energy_identity_residual(const Trajectory& traj) {
    double worst = 0.0;
    for (std::size_t k = 1; k < traj.checkpoints.size(); ++k)
        if (auto r = energy_identity_residual(traj, k - 1, k)) worst = std::max(worst, *r);
    return worst;
}

json run_summary(const RunConfig& cfg, const Trajectory& traj, const ClassificationReport& rep,
                 double wall_seconds) {
    json out;
    out["artifact_version"] = kVersion;
    out["status"] = to_string(traj.status);
    out["t_final"] = traj.t_final;
    out["classification"] = classification_to_json(rep);
    if (traj.status != RunStatus::NumericalFailure) {
        out["residual_maxima"] = {
            {"mass_balance", max_mass_residual(cfg, traj)},
            {"energy_identity", max_energy_identity_residual(traj)},
        };
    }
    if (traj.failure_time) out["failure_time"] = *traj.failure_time;
    out["wall_seconds"] = wall_seconds;
    out["config"] = echo_config(cfg);
    return out;
}

int status_exit_code(RunStatus status) {
    switch (status) {
        case RunStatus::ReachedHorizon:
        case RunStatus::DecayCertified: return kExitOk;
        case RunStatus::BlowUpDetected: return kExitBlowUp;
        case RunStatus::NumericalFailure: return kExitNumericalFailure;
    }
    return kExitNumericalFailure;
}

bool write_checkpoints(const Trajectory& traj, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) return false;
    for (std::size_t i = 0; i < traj.checkpoints.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "checkpoint_%04zu.csv", i);
        std::ofstream out(std::filesystem::path(dir) / name);
        if (!out) return false;
        const Checkpoint& cp = traj.checkpoints[i];
        out << "x,u\n";
        const std::size_t n = cp.v.size() - 1;
        for (std::size_t j = 0; j <= n; ++j)
            out << fmt17(cp.s * static_cast<double>(j) / static_cast<double>(n)) << ","
                << fmt17(cp.v[j]) << "\n";
        if (!out) return false;
    }
    return true;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    out << "t,s,sdot,u0,linf,l1,energy,dt,newton_iters\n";
    for (const auto& r : traj.records)
        out << fmt17(r.t) << "," << fmt17(r.s) << "," << fmt17(r.sdot) << "," << fmt17(r.u0) << ","
            << fmt17(r.linf) << "," << fmt17(r.l1) << "," << fmt17(r.energy) << "," << fmt17(r.dt)
            << "," << r.newton_iters << "\n";
}

std::vector<DiagnosticsRecord> read_trajectory_csv(std::istream& in) {
    std::vector<DiagnosticsRecord> records;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        DiagnosticsRecord r;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        ss >> r.t >> r.s >> r.sdot >> r.u0 >> r.linf >> r.l1 >> r.energy >> r.dt >> r.newton_iters;
        records.push_back(r);
    }
    return records;
}

json classification_to_json(const ClassificationReport& rep) {
    json out;
    out["verdict"] = to_string(rep.verdict);
    if (rep.decay_rate) out["decay_rate"] = *rep.decay_rate;
    if (rep.front_limit) out["front_limit"] = *rep.front_limit;
    if (rep.certificate_time) out["certificate_time"] = *rep.certificate_time;
    if (rep.blowup && rep.blowup->ok) {
        out["blowup_time_estimate"] = rep.blowup->t_blowup;
        out["blowup_exponent"] = rep.blowup->exponent;
        out["blowup_exponent_ratio"] = rep.blowup->exponent_ratio;
        out["blowup_fit_residual"] = rep.blowup->fit_residual;
    }
    if (rep.growth && rep.growth->ok) {
        out["growth_exponent"] = rep.growth->beta;
        out["growth_exponent_stderr"] = rep.growth->beta_stderr;
        out["flux_ratio_end"] = rep.growth->flux_ratio_end;
        out["flux_ratio_begin"] = rep.growth->flux_ratio_begin;
    }
    out["flags"] = rep.flags;
    return out;
}

bool VerifyReport::all_pass() const {
    for (const auto& c : checks)
        if (c.applicable && !c.pass) return false;
    return true;
}

VerifyReport verify_identities(const RunConfig& config) {
    VerifyReport report;
    RunConfig cfg = config;
    if (cfg.numerics.checkpoint_times.empty()) {
        for (int i = 1; i <= 10; ++i)
            cfg.numerics.checkpoint_times.push_back(cfg.numerics.horizon * i / 10.0);
    }
    cfg.numerics.stop_on_certificate = false;  // identities need the full horizon

    const Trajectory traj = run(cfg.problem, cfg.numerics);
    const double t_warmup = warmup_time(cfg);
    const bool nonlinear = cfg.problem.bc.kind == BcMode::Kind::NonlinearFlux;

    {
        VerifyCheck c;
        c.name = "mass_balance";
        c.applicable = nonlinear && traj.status != RunStatus::NumericalFailure;
        if (c.applicable) {
            c.measured = max_mass_residual(cfg, traj);
            c.tolerance = 5e-3 * (cfg.problem.s0 + traj.phi_l1);
            c.pass = c.measured <= c.tolerance;
        } else {
            c.note = "nonlinear-flux runs only";
        }
        report.checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "energy_identity";
        c.applicable = traj.checkpoints.size() >= 2;
        if (c.applicable) {
            double worst_ratio = 0.0;
            for (std::size_t k = 1; k < traj.checkpoints.size(); ++k) {
                const Checkpoint& a = traj.checkpoints[k - 1];
                if (a.t < t_warmup) continue;
                if (auto r = energy_identity_residual(traj, k - 1, k)) {
                    const double e1 = energy(a.v, a.s, cfg.problem.p);
                    worst_ratio = std::max(worst_ratio, *r / (1.0 + std::abs(e1)));
                }
            }
            c.measured = worst_ratio;
            c.tolerance = 1e-2;
            c.pass = c.measured <= c.tolerance;
        } else {
            c.note = "needs at least two checkpoints";
        }
        report.checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "energy_monotone";
        c.applicable = true;
        double worst = 0.0;
        const DiagnosticsRecord* prev = nullptr;
        for (const auto& r : traj.records) {
            if (r.t < t_warmup) continue;
            if (prev) worst = std::max(worst, r.energy - prev->energy);
            prev = &r;
        }
        c.measured = worst;
        c.tolerance = 1e-10;
        c.pass = c.measured <= c.tolerance;
        report.checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "energy_lower_bound";
        c.applicable = traj.status == RunStatus::ReachedHorizon;
        if (c.applicable) {
            double worst = 0.0;  // max bound-minus-energy deficit
            for (const auto& r : traj.records)
                if (r.t >= t_warmup) worst = std::max(worst, energy_lower_bound(r) - r.energy);
            c.measured = worst;
            c.tolerance = 0.0;
            c.pass = worst <= 0.0;
            if (!c.pass) c.note = "suspected-blow-up-missed";
        } else {
            c.note = "only meaningful for runs reaching the horizon";
        }
        report.checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "supersolution_containment";
        const DecaySupersolution sup = decay_supersolution(cfg.problem.s0, cfg.problem.p);
        bool dominated = nonlinear;
        if (nonlinear) {
            const InitialProfile phi = realize_profile(cfg.problem.profile, cfg.problem.s0);
            for (int j = 0; j <= 200 && dominated; ++j) {
                const double x = cfg.problem.s0 * j / 200.0;
                dominated = cfg.problem.lambda * phi.value_at(x) <= sup.value(0.0, x) + 1e-15;
            }
        }
        c.applicable = dominated;
        if (c.applicable) {
            double worst = 0.0;
            for (const auto& r : traj.records)
                worst = std::max(worst, r.s - sup.sigma(r.t));
            for (const auto& cp : traj.checkpoints) {
                const std::size_t n = cp.v.size() - 1;
                for (std::size_t j = 0; j <= n; ++j) {
                    const double x = cp.s * static_cast<double>(j) / static_cast<double>(n);
                    worst = std::max(worst, cp.v[j] - sup.value(cp.t, x));
                }
            }
            c.measured = worst;
            c.tolerance = 1e-10;
            c.pass = worst <= c.tolerance;
        } else {
            c.note = "initial datum not below the supersolution";
        }
        report.checks.push_back(c);
    }
    {
        VerifyCheck c;
        c.name = "similarity_match";
        c.applicable = cfg.problem.bc.kind == BcMode::Kind::DirichletConstant;
        if (c.applicable) {
            // s(t)^2 is asymptotically A^2 (t + t0); fit the slope over the last half.
            const std::size_t half = traj.records.size() / 2;
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            std::size_t m = 0;
            for (std::size_t k = half; k < traj.records.size(); ++k) {
                const double x = traj.records[k].t, y = traj.records[k].s * traj.records[k].s;
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++m;
            }
            const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
            const double a_fit = std::sqrt(std::max(slope, 0.0));
            const SimilarityConstant sc = neumann_similarity_A(cfg.problem.bc.u0, 1e-10);
            c.measured = std::abs(a_fit - sc.A) / sc.A;
            c.tolerance = 0.01;
            c.pass = c.measured <= c.tolerance;
        } else {
            c.note = "Dirichlet-mode runs only";
        }
        report.checks.push_back(c);
    }
    return report;
}

int cmd_simulate(const RunConfig& config) {
    std::ofstream csv(config.output.csv_path);
    std::ofstream js(config.output.json_path);
    if (!csv || !js) {
        std::cerr << "stefanlab: cannot open output files\n";
        return kExitIoError;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Trajectory traj = run(config.problem, config.numerics);
    const ClassificationReport rep = classify(traj, config.classifier);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_trajectory_csv(traj, csv);
    if (!csv) return kExitIoError;
    js << run_summary(config, traj, rep, wall).dump(2) << "\n";
    if (!js) return kExitIoError;
    if (!config.output.checkpoint_dir.empty() &&
        !write_checkpoints(traj, config.output.checkpoint_dir))
        return kExitIoError;
    log_info(std::string("simulate: status ") + to_string(traj.status) + ", verdict " +
             to_string(rep.verdict));
    return status_exit_code(traj.status);
}

int cmd_verify(const RunConfig& config) {
    const VerifyReport report = verify_identities(config);
    json out;
    out["artifact_version"] = kVersion;
    for (const auto& c : report.checks) {
        std::printf("%-28s %s  measured=%.6g tol=%.6g %s\n", c.name.c_str(),
                    !c.applicable ? "SKIP" : (c.pass ? "PASS" : "FAIL"), c.measured, c.tolerance,
                    c.note.c_str());
        out["checks"].push_back({{"name", c.name},
                                 {"applicable", c.applicable},
                                 {"pass", c.pass},
                                 {"measured", c.measured},
                                 {"tolerance", c.tolerance},
                                 {"note", c.note}});
    }
    out["all_pass"] = report.all_pass();
    out["config"] = echo_config(config);
    std::ofstream js(config.output.json_path);
    if (!js) return kExitIoError;
    js << out.dump(2) << "\n";
    return report.all_pass() ? kExitOk : kExitNumericalFailure;
}

int cmd_sweep(const RunConfig& config, const std::vector<double>& lambdas, int jobs) {
    if (lambdas.empty()) {
        std::cerr << "stefanlab: sweep needs a non-empty lambda list\n";
        return kExitConfigError;
    }
    struct SweepEntry {
        double lambda;
        Trajectory traj;
        ClassificationReport rep;
    };
    std::vector<SweepEntry> entries(lambdas.size());
    std::vector<std::future<void>> futures;
    std::atomic<std::size_t> next{0};
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(lambdas.size())));
    for (int w = 0; w < workers; ++w)
        futures.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < lambdas.size(); i = next.fetch_add(1)) {
                ProblemSpec spec = config.problem;
                spec.lambda = lambdas[i];
                entries[i].lambda = lambdas[i];
                entries[i].traj = run(spec, config.numerics);
                entries[i].rep = classify(entries[i].traj, config.classifier);
            }
        }));
    for (auto& f : futures) f.get();

    std::sort(entries.begin(), entries.end(),
              [](const SweepEntry& a, const SweepEntry& b) { return a.lambda < b.lambda; });

    // Monotonicity audit: the blow-up verdicts must form a single flip in lambda.
    bool seen_blowup = false, single_flip = true, any_failure = false;
    json runs = json::array();
    for (const auto& e : entries) {
        const bool blow = e.rep.verdict == Verdict::BlowUp;
        if (seen_blowup && !blow) single_flip = false;
        seen_blowup = seen_blowup || blow;
        any_failure = any_failure || e.traj.status == RunStatus::NumericalFailure;
        runs.push_back({{"lambda", e.lambda},
                        {"status", to_string(e.traj.status)},
                        {"classification", classification_to_json(e.rep)}});
    }
    json out;
    out["artifact_version"] = kVersion;
    out["runs"] = runs;
    out["verdict_single_flip"] = single_flip;
    if (!single_flip) out["audit"] = "non-monotone verdict sequence: numerics failure";
    out["config"] = echo_config(config);
    std::ofstream js(config.output.json_path);
    if (!js) return kExitIoError;
    js << out.dump(2) << "\n";
    return any_failure ? kExitNumericalFailure : kExitOk;
}

int cmd_bisect(const RunConfig& config, double lambda_lo, double lambda_hi, double tol) {
    json out;
    out["artifact_version"] = kVersion;
    try {
        const BisectResult res =
            bisect_lambda(config.problem, config.numerics, config.classifier, lambda_lo, lambda_hi, tol);
        out["bracket"] = {{"lambda_lo", res.lambda_lo}, {"lambda_hi", res.lambda_hi}};
        json log = json::array();
        for (const auto& [lambda, verdict] : res.log)
            log.push_back({{"lambda", lambda}, {"verdict", to_string(verdict)}});
        out["runs"] = log;
        out["flags"] = res.flags;
    } catch (const bad_bracket_error& e) {
        std::cerr << "stefanlab: " << e.what() << "\n";
        return kExitConfigError;
    }
    out["config"] = echo_config(config);
    std::ofstream js(config.output.json_path);
    if (!js) return kExitIoError;
    js << out.dump(2) << "\n";
    return kExitOk;
}

int cmd_convergence(const RunConfig& config, int levels) {
    if (levels < 3) {
        std::cerr << "stefanlab: convergence study needs at least 3 levels\n";
        return kExitConfigError;
    }
    const double theta = config.numerics.theta;
    const ConvergenceStudy temporal = mms_temporal_study(theta, levels, 64, 0.5);
    const ConvergenceStudy spatial = mms_spatial_study(0.5, levels, 32, 0.05);
    const double temporal_min = theta >= 1.0 ? 0.9 : 1.8;
    const double spatial_min = 1.9;

    auto table = [](const char* name, const ConvergenceStudy& s) {
        std::printf("%s study:\n  %-12s %-12s\n", name, "resolution", "Linf error");
        for (std::size_t i = 0; i < s.resolution.size(); ++i)
            std::printf("  %-12.4e %-12.4e\n", s.resolution[i], s.error[i]);
        std::printf("  fitted order: %.3f\n", s.order);
    };
    table("temporal", temporal);
    table("spatial", spatial);

    json out;
    out["artifact_version"] = kVersion;
    out["temporal"] = {{"theta", theta},
                       {"resolution", temporal.resolution},
                       {"error", temporal.error},
                       {"order", temporal.order},
                       {"required", temporal_min}};
    out["spatial"] = {{"resolution", spatial.resolution},
                      {"error", spatial.error},
                      {"order", spatial.order},
                      {"required", spatial_min}};
    const bool pass = temporal.order >= temporal_min && spatial.order >= spatial_min;
    out["pass"] = pass;
    std::ofstream js(config.output.json_path);
    if (!js) return kExitIoError;
    js << out.dump(2) << "\n";
    return pass ? kExitOk : kExitNumericalFailure;
}

int cmd_selfsimilar(double u0, double tol, const std::string& json_path) {
    SimilarityConstant sc;
    try {
        sc = neumann_similarity_A(u0, tol);
    } catch (const std::invalid_argument& e) {
        std::cerr << "stefanlab: " << e.what() << "\n";
        return kExitConfigError;
    }
    json out = {{"u0", sc.u0}, {"A", sc.A}, {"residual", sc.residual}};
    std::printf("A(%.17g) = %.17g (residual %.3e)\n", sc.u0, sc.A, sc.residual);
    if (!json_path.empty()) {
        std::ofstream js(json_path);
        if (!js) return kExitIoError;
        js << out.dump(2) << "\n";
    }
    return kExitOk;
}

}  // namespace stefanlab
