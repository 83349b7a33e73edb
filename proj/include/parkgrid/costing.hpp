#pragma once

#include <string>
#include <vector>

#include "parkgrid/scenario.hpp"
#include "parkgrid/storage.hpp"

namespace parkgrid {

struct CostBreakdown {
    double grid_cost_cny = 0.0;
    double wind_cost_cny = 0.0;
    double solar_cost_cny = 0.0;
    double storage_cost_cny = 0.0;
    double total_cny = 0.0;
};

// The four per-day report rows, in report order: electricity purchased,
// wind/solar waste, total supply cost, average unit cost.
struct EconomicIndicators {
    double purchased_kwh_per_day = 0.0;
    double curtailment_kw_per_day = 0.0;  // summed per-step average-kW curtailment per day
    double total_cost_cny_per_day = 0.0;
    double avg_unit_cost_cny_per_kwh = 0.0;
};

// Storage capital: power block plus energy block, amortized uniformly over
// the operating life in hours.
double power_cost(const StorageSpec& spec);
double energy_cost(const StorageSpec& spec);
double amortized_storage_cost_per_hour(const StorageSpec& spec);

// Hour-of-day used for the grid tariff lookup at step t.
int hour_of_day(std::size_t t, double step_hours);

// Total supply cost of a dispatched horizon. Grid energy is priced by
// hour-of-day; wind/solar costs are levied on energy actually used, with
// curtailment apportioned pro-rata by each source's share of generation in
// the step. Storage contributes its amortized capital slice.
CostBreakdown supply_cost(const DispatchTrace& trace, const ParkScenario& scenario,
                          const PriceSchedule& prices);

// Per-step total cost (grid energy, renewables actually used, amortized
// storage slice). Sums to supply_cost(...).total_cny over the horizon.
std::vector<double> step_costs(const DispatchTrace& trace, const ParkScenario& scenario,
                               const PriceSchedule& prices);

// Daily indicators over the trace; horizons other than 24 h normalize by
// horizon_hours / 24. Throws if the scenario carries no load energy.
EconomicIndicators indicators(const DispatchTrace& trace, const ParkScenario& scenario,
                              const PriceSchedule& prices);

}  // namespace parkgrid
