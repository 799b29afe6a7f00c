#include "seabed/commands.hpp"
#include "seabed/dynamics.hpp"
#include "seabed/inversion.hpp"

#include <CLI11.hpp>

#include <exception>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonArgs {
    std::string config_path;
    std::string output_dir = ".";
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config_path, "experiment config file")
        ->required();
    cmd->add_option("--output", args.output_dir, "output directory");
    cmd->add_option("--override", args.overrides,
                    "key=value override, repeatable");
}

seabed::ExperimentConfig load(const CommonArgs& args)
{
    auto config = seabed::parse_config_file(args.config_path);
    for (const auto& assignment : args.overrides)
        seabed::apply_override(config, assignment);
    return config;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"seabed: bathymetry reconstruction from surface-wave "
                 "measurements in dispersive shallow-water models"};
    app.require_subcommand(1);

    CommonArgs sim_args, obs_args, eig_args, rec_args;
    auto* sim = app.add_subcommand("simulate", "forward model run");
    add_common(sim, sim_args);
    auto* obs = app.add_subcommand("observe", "observer velocimetry run");
    add_common(obs, obs_args);
    auto* eig = app.add_subcommand("eigen", "inversion-operator eigenspectrum");
    add_common(eig, eig_args);
    auto* rec = app.add_subcommand("reconstruct", "end-to-end bottom recovery");
    add_common(rec, rec_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            seabed::cli::cmd_simulate(load(sim_args), sim_args.output_dir);
        else if (obs->parsed())
            seabed::cli::cmd_observe(load(obs_args), obs_args.output_dir);
        else if (eig->parsed())
            seabed::cli::cmd_eigen(load(eig_args), eig_args.output_dir);
        else if (rec->parsed())
            seabed::cli::cmd_reconstruct(load(rec_args), rec_args.output_dir);
    } catch (const seabed::BlowupError& e) {
        std::cerr << "error (blow-up): " << e.what() << "\n";
        return 4;
    } catch (const seabed::SolverError& e) {
        std::cerr << "error (solver): " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
