#include "parkgrid/costing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace parkgrid {

double power_cost(const StorageSpec& spec) {
    return spec.power_kw * spec.power_unit_cost_cny_per_kw;
}

double energy_cost(const StorageSpec& spec) {
    return spec.capacity_kwh * spec.energy_unit_cost_cny_per_kwh;
}

double amortized_storage_cost_per_hour(const StorageSpec& spec) {
    if (!(spec.lifetime_years > 0.0))
        throw std::runtime_error("amortized_storage_cost_per_hour: lifetime must be positive");
    return (power_cost(spec) + energy_cost(spec)) / (spec.lifetime_years * 365.0 * 24.0);
}

int hour_of_day(std::size_t t, double step_hours) {
    auto hour = static_cast<long long>(std::floor(static_cast<double>(t) * step_hours));
    return static_cast<int>(hour % 24);
}

namespace {

void check_horizon(const DispatchTrace& trace, const ParkScenario& scenario) {
    if (trace.steps.size() != scenario.steps())
        throw std::runtime_error("supply_cost: trace and scenario horizons differ");
    if (trace.step_hours != scenario.step_hours())
        throw std::runtime_error("supply_cost: trace and scenario step_hours differ");
}

// Renewable power actually consumed in a step: curtailed power is split
// pro-rata by each source's share of the step's generation.
std::pair<double, double> renewables_used(double pv, double wind, double curtailment_kw) {
    double generation = pv + wind;
    if (curtailment_kw <= 0.0 || generation <= 0.0) return {pv, wind};
    return {std::max(0.0, pv - curtailment_kw * pv / generation),
            std::max(0.0, wind - curtailment_kw * wind / generation)};
}

}  // namespace

CostBreakdown supply_cost(const DispatchTrace& trace, const ParkScenario& scenario,
                          const PriceSchedule& prices) {
    check_horizon(trace, scenario);
    validate(prices);

    const double dt = trace.step_hours;
    CostBreakdown cb;
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const DispatchStep& step = trace.steps[t];
        cb.grid_cost_cny += step.grid_import_kw * dt *
                            prices.grid_price_cny_per_kwh[hour_of_day(t, dt)];
        auto [pv_used, wind_used] = renewables_used(scenario.pv.values[t],
                                                    scenario.wind.values[t],
                                                    step.curtailment_kw);
        cb.solar_cost_cny += pv_used * dt * prices.solar_unit_cost_cny_per_kwh;
        cb.wind_cost_cny += wind_used * dt * prices.wind_unit_cost_cny_per_kwh;
    }
    cb.storage_cost_cny = amortized_storage_cost_per_hour(trace.spec) * trace.horizon_hours();
    cb.total_cny = cb.grid_cost_cny + cb.wind_cost_cny + cb.solar_cost_cny + cb.storage_cost_cny;
    return cb;
}

std::vector<double> step_costs(const DispatchTrace& trace, const ParkScenario& scenario,
                               const PriceSchedule& prices) {
    check_horizon(trace, scenario);
    validate(prices);

    const double dt = trace.step_hours;
    const double storage_slice = amortized_storage_cost_per_hour(trace.spec) * dt;
    std::vector<double> costs(trace.steps.size());
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const DispatchStep& step = trace.steps[t];
        auto [pv_used, wind_used] = renewables_used(scenario.pv.values[t],
                                                    scenario.wind.values[t],
                                                    step.curtailment_kw);
        costs[t] = step.grid_import_kw * dt * prices.grid_price_cny_per_kwh[hour_of_day(t, dt)] +
                   pv_used * dt * prices.solar_unit_cost_cny_per_kwh +
                   wind_used * dt * prices.wind_unit_cost_cny_per_kwh + storage_slice;
    }
    return costs;
}

EconomicIndicators indicators(const DispatchTrace& trace, const ParkScenario& scenario,
                              const PriceSchedule& prices) {
    CostBreakdown cb = supply_cost(trace, scenario, prices);

    const double dt = trace.step_hours;
    const double days = trace.horizon_hours() / 24.0;
    double purchased_kwh = 0.0;
    double curtailed = 0.0;
    double load_kwh = 0.0;
    for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        purchased_kwh += trace.steps[t].grid_import_kw * dt;
        curtailed += trace.steps[t].curtailment_kw * dt;
        load_kwh += scenario.load.values[t] * dt;
    }
    if (!(load_kwh > 0.0))
        throw std::runtime_error("indicators: scenario carries no load energy, "
                                 "average unit cost is undefined");

    EconomicIndicators ind;
    ind.purchased_kwh_per_day = purchased_kwh / days;
    ind.curtailment_kw_per_day = curtailed / days;
    ind.total_cost_cny_per_day = cb.total_cny / days;
    ind.avg_unit_cost_cny_per_kwh = ind.total_cost_cny_per_day / (load_kwh / days);
    return ind;
}

}  // namespace parkgrid
