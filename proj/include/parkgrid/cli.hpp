#pragma once

#include <cstdint>
#include <string>

namespace parkgrid::cli {

// Inputs shared by every subcommand.
struct CommonArgs {
    std::string scenario_path;
    double pv_capacity_kw = 0.0;
    double wind_capacity_kw = 0.0;
    std::string prices_path;
    std::string out_dir;
    std::uint64_t seed = 0;
};

struct SimulateArgs {
    CommonArgs common;
    double power_kw = 50.0;
    double capacity_kwh = 100.0;
    double initial_soc_frac = 0.5;
};

using CompareArgs = SimulateArgs;

struct OptimizeArgs {
    CommonArgs common;
    double power_min = 0.0;
    double power_max = 100.0;
    double capacity_min = 0.0;
    double capacity_max = 200.0;
    int population_size = 40;
    int generations = 60;
    bool grid_oracle = false;
    double power_step = 0.0;     // 0 = (max - min) / 10
    double capacity_step = 0.0;  // 0 = (max - min) / 8
    bool capital_proxy = false;  // optimize the flat capital proxy instead of supply cost
};

struct AnalyzeArgs {
    CommonArgs common;
    double power_kw = 50.0;
    double capacity_kwh = 100.0;
    double initial_soc_frac = 0.5;
    int n_trees = 100;
    int importance_repeats = 10;
};

// Each command returns a process exit status: 0 when every output file was
// written and validated, 1 otherwise (with the failing validation on stderr).
//
// simulate: trace.csv, balance.csv, report.json
int cmd_simulate(const SimulateArgs& args);
// compare: comparison.csv (indicator rows, without/with storage columns), comparison.json
int cmd_compare(const CompareArgs& args);
// optimize: ga_result.json, convergence.csv
int cmd_optimize(const OptimizeArgs& args);
// analyze: dataset.csv, importance.csv, linear_model.json
int cmd_analyze(const AnalyzeArgs& args);

}  // namespace parkgrid::cli
