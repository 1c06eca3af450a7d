#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hvns/app.hpp"

int main(int argc, char** argv) {
    CLI::App cli{"hvns: hyperviscosity-regularized Navier-Stokes laboratory"};
    cli.require_subcommand(1);

    std::string config_path, out_dir = "out";
    auto add_io = [&](CLI::App* sub, bool needs_config = true) {
        if (needs_config)
            sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_dir, "output directory");
    };

    auto* sim = cli.add_subcommand("simulate", "integrate and dump snapshots + norms.csv");
    auto* ver = cli.add_subcommand("verify", "integrate and check every a-priori estimate");
    auto* swp = cli.add_subcommand("sweep-eps", "eps -> 0 solution-convergence sweep");
    auto* att = cli.add_subcommand("attractor-dist", "attractor-proxy semidistance sweep");
    auto* per = cli.add_subcommand("perturbed", "perturbed-forcing robustness experiment");
    auto* self = cli.add_subcommand("selftest", "run the built-in example suite");
    add_io(sim);
    add_io(ver);
    add_io(swp);
    add_io(att);
    add_io(per);
    (void)self;

    CLI11_PARSE(cli, argc, argv);

    try {
        if (self->parsed()) return hvns::app::selftest();
        const hvns::RunConfig cfg = hvns::load_config(config_path);
        if (sim->parsed()) return hvns::app::simulate(cfg, out_dir);
        if (ver->parsed()) return hvns::app::verify(cfg, out_dir);
        if (swp->parsed()) return hvns::app::sweep_eps(cfg, out_dir);
        if (att->parsed()) return hvns::app::attractor_dist(cfg, out_dir);
        if (per->parsed()) return hvns::app::perturbed(cfg, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
