#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "stefanlab/cli.hpp"
#include "stefanlab/config.hpp"

namespace {

// Output paths are taken relative to --out when it is set.
void apply_out_dir(stefanlab::RunConfig& cfg, const std::string& out_dir) {
    if (out_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    cfg.output.csv_path = (fs::path(out_dir) / cfg.output.csv_path).string();
    cfg.output.json_path = (fs::path(out_dir) / cfg.output.json_path).string();
    if (!cfg.output.checkpoint_dir.empty())
        cfg.output.checkpoint_dir = (fs::path(out_dir) / cfg.output.checkpoint_dir).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stefanlab: one-phase Stefan problem with nonlinear boundary flux"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global flags to appear after the subcommand

    std::string config_path, out_dir;
    int jobs = 1;
    bool seed_free = false;  // asserts determinism; the artifact links no RNG
    app.add_option("--config", config_path, "path to the JSON run configuration");
    app.add_option("--out", out_dir, "output directory (prefixes configured paths)");
    app.add_option("--jobs", jobs, "max concurrent runs for sweep/bisect endpoints");
    app.add_flag("--seed-free", seed_free, "assert that the run is fully deterministic");

    auto* sim = app.add_subcommand("simulate", "single run, CSV + JSON outputs");
    auto* ver = app.add_subcommand("verify", "identity suite at the config's resolution");
    auto* swp = app.add_subcommand("sweep", "run a list of amplitudes concurrently");
    std::vector<double> lambdas;
    swp->add_option("--lambdas", lambdas, "amplitude values")->delimiter(',');
    auto* bis = app.add_subcommand("bisect", "bracket the critical amplitude");
    double lambda_lo = 0.0, lambda_hi = 0.0, tol = 1e-2;
    bis->add_option("--lo", lambda_lo, "non-blow-up endpoint")->required();
    bis->add_option("--hi", lambda_hi, "blow-up endpoint")->required();
    bis->add_option("--tol", tol, "bracket width tolerance");
    auto* cnv = app.add_subcommand("convergence", "manufactured-solution order study");
    int levels = 3;
    cnv->add_option("--levels", levels, "refinement levels (>= 3)");
    auto* ssim = app.add_subcommand("selfsimilar", "front-growth constant A(u0)");
    double u0 = 1.0, ss_tol = 1e-10;
    std::string ss_json;
    ssim->add_option("--u0", u0, "Dirichlet boundary value");
    ssim->add_option("--tol", ss_tol, "root tolerance");
    ssim->add_option("--json", ss_json, "optional JSON output path");

    CLI11_PARSE(app, argc, argv);

    if (ssim->parsed()) return stefanlab::cmd_selfsimilar(u0, ss_tol, ss_json);

    stefanlab::RunConfig cfg;
    try {
        if (config_path.empty()) throw stefanlab::config_error("--config is required");
        cfg = stefanlab::parse_config_file(config_path);
        apply_out_dir(cfg, out_dir);
    } catch (const stefanlab::config_error& e) {
        std::cerr << "stefanlab: " << e.what() << "\n";
        return stefanlab::kExitConfigError;
    }

    try {
        if (sim->parsed()) return stefanlab::cmd_simulate(cfg);
        if (ver->parsed()) return stefanlab::cmd_verify(cfg);
        if (swp->parsed()) return stefanlab::cmd_sweep(cfg, lambdas, jobs);
        if (bis->parsed()) return stefanlab::cmd_bisect(cfg, lambda_lo, lambda_hi, tol);
        if (cnv->parsed()) return stefanlab::cmd_convergence(cfg, levels);
    } catch (const std::exception& e) {
        std::cerr << "stefanlab: " << e.what() << "\n";
        return stefanlab::kExitNumericalFailure;
    }
    return stefanlab::kExitConfigError;
}
