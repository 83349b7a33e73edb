#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "parkgrid/cli.hpp"

namespace {

// Parses "a:b" into a (min, max) pair.
std::pair<double, double> parse_bounds(const std::string& text, const std::string& flag) {
    auto fail = [&] {
        return std::runtime_error(flag + ": expected min:max, got '" + text + "'");
    };
    auto colon = text.find(':');
    if (colon == std::string::npos) throw fail();
    try {
        double lo = std::stod(text.substr(0, colon));
        double hi = std::stod(text.substr(colon + 1));
        return {lo, hi};
    } catch (const std::exception&) {
        throw fail();
    }
}

void add_common(CLI::App* cmd, parkgrid::cli::CommonArgs& args) {
    cmd->add_option("--scenario", args.scenario_path, "Scenario CSV (hour,load_kw,pv_pu,wind_pu)")
        ->required();
    cmd->add_option("--pv-capacity-kw", args.pv_capacity_kw, "Installed PV capacity (kW)")
        ->required();
    cmd->add_option("--wind-capacity-kw", args.wind_capacity_kw, "Installed wind capacity (kW)")
        ->required();
    cmd->add_option("--prices", args.prices_path, "Price schedule config file")->required();
    cmd->add_option("--out", args.out_dir, "Output directory (created if absent)")->required();
    cmd->add_option("--seed", args.seed, "Seed for every random component");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Park microgrid storage dispatch, costing and sizing toolkit"};
    app.require_subcommand(1);

    parkgrid::cli::SimulateArgs sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Dispatch one storage configuration and report costs");
    add_common(simulate, sim.common);
    simulate->add_option("--power-kw", sim.power_kw, "Storage power rating (kW)")
        ->default_val(50.0);
    simulate->add_option("--capacity-kwh", sim.capacity_kwh, "Storage capacity (kWh)")
        ->default_val(100.0);
    simulate->add_option("--initial-soc-frac", sim.initial_soc_frac,
                         "Initial SOC as a fraction of capacity")
        ->default_val(0.5);

    parkgrid::cli::CompareArgs cmp;
    auto* compare = app.add_subcommand(
        "compare", "Compare indicators without and with the configured storage");
    add_common(compare, cmp.common);
    compare->add_option("--power-kw", cmp.power_kw, "Storage power rating (kW)")
        ->default_val(50.0);
    compare->add_option("--capacity-kwh", cmp.capacity_kwh, "Storage capacity (kWh)")
        ->default_val(100.0);
    compare->add_option("--initial-soc-frac", cmp.initial_soc_frac,
                        "Initial SOC as a fraction of capacity")
        ->default_val(0.5);

    parkgrid::cli::OptimizeArgs opt;
    std::string power_bounds = "0:100";
    std::string capacity_bounds = "0:200";
    auto* optimize =
        app.add_subcommand("optimize", "Search the cheapest storage size with a GA");
    add_common(optimize, opt.common);
    optimize->add_option("--power-bounds", power_bounds, "Power search range, min:max kW");
    optimize->add_option("--capacity-bounds", capacity_bounds,
                         "Capacity search range, min:max kWh");
    optimize->add_option("--population", opt.population_size, "GA population size")
        ->default_val(40);
    optimize->add_option("--generations", opt.generations, "GA generations")->default_val(60);
    optimize->add_flag("--grid-oracle", opt.grid_oracle,
                       "Also run the exhaustive grid search and report both");
    optimize->add_option("--power-step", opt.power_step,
                         "Grid oracle power step (default: range/10)");
    optimize->add_option("--capacity-step", opt.capacity_step,
                         "Grid oracle capacity step (default: range/8)");
    optimize->add_flag("--capital-proxy", opt.capital_proxy,
                       "Optimize the flat capital proxy (100 CNY per kW + 100 CNY per kWh) "
                       "instead of the dispatched supply cost");

    parkgrid::cli::AnalyzeArgs ana;
    auto* analyze = app.add_subcommand(
        "analyze", "Rank hourly cost drivers with a random forest");
    add_common(analyze, ana.common);
    analyze->add_option("--power-kw", ana.power_kw, "Storage power rating (kW)")
        ->default_val(50.0);
    analyze->add_option("--capacity-kwh", ana.capacity_kwh, "Storage capacity (kWh)")
        ->default_val(100.0);
    analyze->add_option("--initial-soc-frac", ana.initial_soc_frac,
                        "Initial SOC as a fraction of capacity")
        ->default_val(0.5);
    analyze->add_option("--trees", ana.n_trees, "Number of trees")->default_val(100);
    analyze->add_option("--repeats", ana.importance_repeats,
                        "Shuffles per feature for the importance estimate")
        ->default_val(10);

    CLI11_PARSE(app, argc, argv);

    if (*simulate) return parkgrid::cli::cmd_simulate(sim);
    if (*compare) return parkgrid::cli::cmd_compare(cmp);
    if (*optimize) {
        try {
            std::tie(opt.power_min, opt.power_max) = parse_bounds(power_bounds, "--power-bounds");
            std::tie(opt.capacity_min, opt.capacity_max) =
                parse_bounds(capacity_bounds, "--capacity-bounds");
        } catch (const std::exception& e) {
            std::cerr << "parkgrid optimize: " << e.what() << '\n';
            return 1;
        }
        return parkgrid::cli::cmd_optimize(opt);
    }
    if (*analyze) return parkgrid::cli::cmd_analyze(ana);
    return 1;
}
