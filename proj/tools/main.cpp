#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lib/runner.hpp"

using namespace codazzi::cli;

int main(int argc, char** argv) {
    CLI::App app{"codazzi-lab: chart-based verification of two-eigenvalue Codazzi "
                 "tensors and discrete warped-product detection"};
    app.require_subcommand(1);

    std::string config_path, example_id, out_dir, format, export_path;
    int grid_n = 0;
    unsigned seed = 0;
    bool seed_set = false;
    std::vector<std::string> tol_overrides;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "config file (key = value sections)");
        cmd->add_option("--example", example_id,
                        "named example id (flat, parallel_shift, torus, inconsistent_warp, "
                        "warped_consistent, mu_of_t, mu_xy)");
        cmd->add_option("--grid", grid_n, "override every axis sample count");
        cmd->add_option("--tol", tol_overrides, "tolerance override NAME=VALUE (repeatable)");
        cmd->add_option("--out", out_dir, "output directory for report/CSV files");
        cmd->add_option("--format", format, "json | csv | both");
        cmd->add_option("--seed", seed, "seed for probe draws and iterative solvers")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--export-config", export_path,
                        "write the resolved config to this path before running");
    };

    for (const auto& name : command_names()) add_common(app.add_subcommand(name));

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    try {
        RunConfig cfg;
        if (!config_path.empty()) cfg = load_config_file(config_path);
        if (!example_id.empty()) {
            if (cfg.lambda || !cfg.raw_g.empty())
                throw codazzi::ConfigError("--example conflicts with the config's metric source");
            cfg.example_id = example_id;
        }
        if (grid_n > 0) {
            const int dim = cfg.chart ? cfg.chart->dim() : 3;
            cfg.grid = codazzi::GridSpec::uniform(grid_n, dim);
        }
        for (const auto& kv : tol_overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw codazzi::ConfigError("--tol expects NAME=VALUE, got '" + kv + "'");
            cfg.tol.set_by_name(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
        }
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!format.empty()) {
            if (format != "json" && format != "csv" && format != "both")
                throw codazzi::ConfigError("format must be json, csv, or both");
            cfg.format = format;
        }
        if (seed_set) cfg.seed = seed;

        if (!export_path.empty()) {
            std::ofstream out(export_path);
            if (!out) throw codazzi::ConfigError("cannot write '" + export_path + "'");
            out << export_config(cfg);
        }

        const RunResult result = run_command(command, cfg);
        write_outputs(result, cfg);
        std::cout << result.report.dump(2) << std::endl;
        return result.exit_code;
    } catch (const codazzi::Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
