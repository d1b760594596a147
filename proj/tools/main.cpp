#include <cstdlib>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "commands.hpp"
#include "levy_restock/errors.hpp"

using namespace levy_restock;
using namespace levy_restock::cli;

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid barrier inventory policies under spectrally negative Levy demand"};
    app.require_subcommand(1);

    const std::map<std::string, std::pair<std::string, int (*)(const RunConfig&, const Flags&)>> commands{
        {"solve", {"solve for the optimal barriers (JSON)", cmd_solve}},
        {"gamma-scan", {"Gamma(a, b) over b for a near a* (CSV a,b,Gamma)", cmd_gamma_scan}},
        {"value", {"cost of the solved and perturbed policies on an x grid (CSV)", cmd_value}},
        {"sweep-kc", {"solve for each K_c in study.kc_list (CSV K_c,a*,b*,v(x_ref))", cmd_sweep_kc}},
        {"compare", {"hybrid against the pure regular and pure discounted policies (CSV)", cmd_compare}},
        {"simulate", {"Monte Carlo check of the cost at sim.x0 (JSON)", cmd_simulate}},
        {"verify", {"variational inequality and smooth fit report (JSON)", cmd_verify}},
        {"reproduce-paper", {"write every figure CSV into the --out directory", cmd_reproduce}},
    };

    Flags flags;
    std::string grid_text;
    std::uint64_t seed = 0;
    for (const auto& [name, c] : commands) {
        CLI::App* sub = app.add_subcommand(name, c.first);
        sub->add_option("--config", flags.config_path, "JSON config")->required();
        sub->add_option("--out", flags.out, "output file (directory for reproduce-paper); - for stdout");
        sub->add_option("--seed", seed, "overrides sim.seed");
        sub->add_option("--x-grid", grid_text, "x grid lo:hi:n");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (const auto& [name, c] : commands) {
            const CLI::App* sub = app.get_subcommand(name);
            if (!sub->parsed()) continue;
            if (sub->count("--seed")) flags.seed = seed;
            if (!grid_text.empty()) flags.x_grid = parse_grid(grid_text);
            const RunConfig rc = load_config(flags.config_path);
            return c.second(rc, flags);
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
