#include <CLI11.hpp>

#include "bathyflow/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bathyflow: spectral travelling-wave solver over decaying bathymetry"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int jobs = 1;
    std::string mu_sweep;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "JSON run configuration")->required();
        cmd->add_option("--out", out_dir, "output directory (default: outputs.dir)");
        cmd->add_option("--jobs", jobs, "worker threads for mode solves");
        return cmd;
    };

    auto* solve = add_common(app.add_subcommand("solve", "run the mode hierarchy"), true);
    auto* verify =
        add_common(app.add_subcommand("verify", "check solve artifacts and properties"), true);
    verify->add_option("--mu-sweep", mu_sweep, "comma list of mu values for residual scaling");
    auto* nf = add_common(app.add_subcommand("nf", "normal form and canonical chain"), true);
    auto* trace =
        add_common(app.add_subcommand("trace", "trajectories and stability probe"), true);
    auto* report = app.add_subcommand("report", "print collected reports");
    report->add_option("--out", out_dir, "output directory to read")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (report->parsed()) return bathyflow::cmd_report(out_dir);

        bathyflow::RunConfig cfg = bathyflow::load_config(config_path);
        if (jobs > 1) cfg.run.jobs = jobs;
        if (!mu_sweep.empty()) {
            cfg.mu_sweep.clear();
            std::stringstream ss(mu_sweep);
            std::string tok;
            while (std::getline(ss, tok, ',')) cfg.mu_sweep.push_back(std::stod(tok));
        }
        const std::string dir = out_dir.empty() ? cfg.out_dir : out_dir;

        if (solve->parsed()) return bathyflow::cmd_solve(cfg, dir);
        if (verify->parsed()) return bathyflow::cmd_verify(cfg, dir);
        if (nf->parsed()) return bathyflow::cmd_nf(cfg, dir);
        if (trace->parsed()) return bathyflow::cmd_trace(cfg, dir);
        return bathyflow::kConfigError;
    } catch (const std::exception& e) {
        bathyflow::logmsg(3, e.what());
        return bathyflow::kConfigError;
    }
}
