#include "parkgrid/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "parkgrid/costing.hpp"
#include "parkgrid/forest.hpp"
#include "parkgrid/ga.hpp"
#include "parkgrid/scenario.hpp"
#include "parkgrid/storage.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace parkgrid::cli {

namespace {

struct Inputs {
    ParkScenario scenario;
    PriceSchedule prices;
};

Inputs load_inputs(const CommonArgs& args) {
    Inputs in;
    in.scenario = load_scenario(args.scenario_path, args.pv_capacity_kw, args.wind_capacity_kw);
    in.prices = load_prices(args.prices_path);
    return in;
}

fs::path prepare_out_dir(const CommonArgs& args) {
    if (args.out_dir.empty()) throw std::runtime_error("output directory not set");
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

json indicators_json(const EconomicIndicators& ind) {
    return json{{"purchased_kwh_per_day", ind.purchased_kwh_per_day},
                {"curtailment_kw_per_day", ind.curtailment_kw_per_day},
                {"total_cost_cny_per_day", ind.total_cost_cny_per_day},
                {"avg_unit_cost_cny_per_kwh", ind.avg_unit_cost_cny_per_kwh}};
}

json breakdown_json(const CostBreakdown& cb) {
    return json{{"grid_cost_cny", cb.grid_cost_cny},
                {"wind_cost_cny", cb.wind_cost_cny},
                {"solar_cost_cny", cb.solar_cost_cny},
                {"storage_cost_cny", cb.storage_cost_cny},
                {"total_cny", cb.total_cny}};
}

void write_json(const json& j, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

// Every emitted file must exist and be non-empty; JSON files must parse.
void verify_outputs(const std::vector<fs::path>& paths) {
    for (const auto& p : paths) {
        if (!fs::exists(p) || fs::file_size(p) == 0)
            throw std::runtime_error("output '" + p.string() + "' missing or empty");
        if (p.extension() == ".json") {
            std::ifstream in(p);
            json parsed = json::parse(in, nullptr, false);
            if (parsed.is_discarded())
                throw std::runtime_error("output '" + p.string() + "' is not valid JSON");
        }
    }
}

void write_balance_csv(const DispatchTrace& trace, const ParkScenario& scenario,
                       const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "t,load_kw,pv_kw,wind_kw,grid_import_kw,charge_kw,discharge_kw,curtailment_kw\n";
    char buf[256];
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const DispatchStep& s = trace.steps[t];
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", t,
                      scenario.load.values[t], scenario.pv.values[t], scenario.wind.values[t],
                      s.grid_import_kw, s.charge_kw, s.discharge_kw, s.curtailment_kw);
        out << buf;
    }
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

void write_comparison_csv(const EconomicIndicators& without, const EconomicIndicators& with,
                          const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << "indicator,without_storage,with_storage\n";
    char buf[160];
    auto row = [&](const char* name, double a, double b) {
        std::snprintf(buf, sizeof(buf), "%s,%.2f,%.2f\n", name, a, b);
        out << buf;
    };
    row("electricity_purchased_kwh_per_day", without.purchased_kwh_per_day,
        with.purchased_kwh_per_day);
    row("wind_solar_waste_kw_per_day", without.curtailment_kw_per_day,
        with.curtailment_kw_per_day);
    row("total_supply_cost_cny_per_day", without.total_cost_cny_per_day,
        with.total_cost_cny_per_day);
    row("avg_unit_cost_cny_per_kwh", without.avg_unit_cost_cny_per_kwh,
        with.avg_unit_cost_cny_per_kwh);
    out << "# waste_kw_per_day is the summed per-step average-kW curtailment, per day\n";
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

int run_guarded(const char* command, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "parkgrid " << command << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int cmd_simulate(const SimulateArgs& args) {
    return run_guarded("simulate", [&] {
        Inputs in = load_inputs(args.common);
        fs::path dir = prepare_out_dir(args.common);

        StorageSpec spec;
        spec.power_kw = args.power_kw;
        spec.capacity_kwh = args.capacity_kwh;
        DispatchTrace trace = simulate(in.scenario, spec, args.initial_soc_frac);

        write_trace_csv(trace, (dir / "trace.csv").string());
        write_balance_csv(trace, in.scenario, dir / "balance.csv");

        double load_kwh = 0.0;
        for (double v : in.scenario.load.values) load_kwh += v * in.scenario.step_hours();
        json report{{"park_id", in.scenario.park_id},
                    {"horizon_hours", trace.horizon_hours()},
                    {"load_kwh_per_day", load_kwh / (trace.horizon_hours() / 24.0)},
                    {"storage",
                     {{"power_kw", spec.power_kw},
                      {"capacity_kwh", spec.capacity_kwh},
                      {"initial_soc_frac", args.initial_soc_frac}}},
                    {"indicators", indicators_json(indicators(trace, in.scenario, in.prices))},
                    {"cost_breakdown", breakdown_json(supply_cost(trace, in.scenario, in.prices))}};
        write_json(report, dir / "report.json");

        verify_outputs({dir / "trace.csv", dir / "balance.csv", dir / "report.json"});
    });
}

int cmd_compare(const CompareArgs& args) {
    return run_guarded("compare", [&] {
        Inputs in = load_inputs(args.common);
        fs::path dir = prepare_out_dir(args.common);

        StorageSpec none;  // zero power, zero capacity
        StorageSpec configured;
        configured.power_kw = args.power_kw;
        configured.capacity_kwh = args.capacity_kwh;

        DispatchTrace trace_without = simulate(in.scenario, none, args.initial_soc_frac);
        DispatchTrace trace_with = simulate(in.scenario, configured, args.initial_soc_frac);

        EconomicIndicators without = indicators(trace_without, in.scenario, in.prices);
        EconomicIndicators with = indicators(trace_with, in.scenario, in.prices);

        write_comparison_csv(without, with, dir / "comparison.csv");
        json report{{"park_id", in.scenario.park_id},
                    {"storage",
                     {{"power_kw", configured.power_kw}, {"capacity_kwh", configured.capacity_kwh}}},
                    {"without_storage",
                     {{"indicators", indicators_json(without)},
                      {"cost_breakdown", breakdown_json(supply_cost(trace_without, in.scenario,
                                                                    in.prices))}}},
                    {"with_storage",
                     {{"indicators", indicators_json(with)},
                      {"cost_breakdown",
                       breakdown_json(supply_cost(trace_with, in.scenario, in.prices))}}}};
        write_json(report, dir / "comparison.json");

        verify_outputs({dir / "comparison.csv", dir / "comparison.json"});
    });
}

int cmd_optimize(const OptimizeArgs& args) {
    return run_guarded("optimize", [&] {
        Inputs in = load_inputs(args.common);
        fs::path dir = prepare_out_dir(args.common);

        GaConfig config;
        config.population_size = args.population_size;
        config.generations = args.generations;
        config.power_bounds = {args.power_min, args.power_max};
        config.capacity_bounds = {args.capacity_min, args.capacity_max};
        config.seed = args.common.seed;
        config.capital_proxy_fitness = args.capital_proxy;

        GaResult result = optimize(in.scenario, in.prices, config);
        write_history_csv(result, (dir / "convergence.csv").string());

        StorageSpec best_spec;
        best_spec.power_kw = result.best.power_kw;
        best_spec.capacity_kwh = result.best.capacity_kwh;
        DispatchTrace best_trace = simulate(in.scenario, best_spec, 0.5);

        json report{{"park_id", in.scenario.park_id},
                    {"seed", args.common.seed},
                    {"generations", config.generations},
                    {"population_size", config.population_size},
                    {"objective", args.capital_proxy ? "capital_proxy" : "supply_cost"},
                    {"best",
                     {{"power_kw", result.best.power_kw},
                      {"capacity_kwh", result.best.capacity_kwh},
                      {"cost_cny_per_day", result.best_cost}}},
                    {"indicators",
                     indicators_json(indicators(best_trace, in.scenario, in.prices))}};

        if (args.grid_oracle) {
            // Collapsed ranges still need a positive step; any value yields
            // the single grid point.
            double p_range = args.power_max - args.power_min;
            double c_range = args.capacity_max - args.capacity_min;
            double p_step = args.power_step > 0.0 ? args.power_step
                                                  : (p_range > 0.0 ? p_range / 10.0 : 1.0);
            double c_step = args.capacity_step > 0.0
                                ? args.capacity_step
                                : (c_range > 0.0 ? c_range / 8.0 : 1.0);
            GridSearchResult oracle =
                grid_search(in.scenario, in.prices, args.power_min, args.power_max, p_step,
                            args.capacity_min, args.capacity_max, c_step, args.capital_proxy);
            report["grid_oracle"] = {{"power_kw", oracle.best.power_kw},
                                     {"capacity_kwh", oracle.best.capacity_kwh},
                                     {"cost_cny_per_day", oracle.best_cost},
                                     {"evaluations", oracle.evaluations}};
        }
        write_json(report, dir / "ga_result.json");

        verify_outputs({dir / "convergence.csv", dir / "ga_result.json"});
    });
}

int cmd_analyze(const AnalyzeArgs& args) {
    return run_guarded("analyze", [&] {
        Inputs in = load_inputs(args.common);
        fs::path dir = prepare_out_dir(args.common);

        StorageSpec spec;
        spec.power_kw = args.power_kw;
        spec.capacity_kwh = args.capacity_kwh;
        DispatchTrace trace = simulate(in.scenario, spec, args.initial_soc_frac);
        std::vector<double> costs = step_costs(trace, in.scenario, in.prices);

        Dataset data;
        data.feature_names = {"pv_output_pu", "purchased_kw", "curtailment_kw"};
        data.rows.reserve(trace.steps.size());
        for (std::size_t t = 0; t < trace.steps.size(); ++t) {
            double pv_pu = in.scenario.pv_capacity_kw > 0.0
                               ? in.scenario.pv.values[t] / in.scenario.pv_capacity_kw
                               : 0.0;
            data.rows.push_back({pv_pu, trace.steps[t].grid_import_kw,
                                 trace.steps[t].curtailment_kw});
        }
        data.target = costs;

        {
            std::ofstream out(dir / "dataset.csv");
            if (!out) throw std::runtime_error("cannot write dataset.csv");
            out << "pv_output_pu,purchased_kw,curtailment_kw,hourly_cost_cny\n";
            char buf[160];
            for (std::size_t i = 0; i < data.rows.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g\n", data.rows[i][0],
                              data.rows[i][1], data.rows[i][2], data.target[i]);
                out << buf;
            }
        }

        double lo = *std::min_element(costs.begin(), costs.end());
        double hi = *std::max_element(costs.begin(), costs.end());
        if (hi - lo <= 1e-12)
            std::cerr << "parkgrid analyze: warning: hourly cost is constant, "
                         "importances will all be zero\n";

        TrainConfig config;
        config.n_trees = args.n_trees;
        config.seed = args.common.seed;
        Forest forest = fit_forest(data, config);
        auto importance =
            permutation_importance(forest, data, args.importance_repeats, args.common.seed + 1);
        write_importance_csv(importance, (dir / "importance.csv").string());

        json linear;
        try {
            LinearModel model = fit_linear(data);
            json coeffs;
            for (std::size_t k = 0; k < data.n_features(); ++k)
                coeffs[data.feature_names[k]] = model.coefficients[k];
            linear = {{"intercept", model.intercept},
                      {"coefficients", coeffs},
                      {"residual_std", model.residual_std}};
        } catch (const std::exception& e) {
            std::cerr << "parkgrid analyze: warning: " << e.what()
                      << "; skipping the linear cross-check\n";
            linear = {{"error", e.what()}};
        }
        write_json(linear, dir / "linear_model.json");

        verify_outputs({dir / "dataset.csv", dir / "importance.csv", dir / "linear_model.json"});
    });
}

}  // namespace parkgrid::cli
