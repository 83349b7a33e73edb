#pragma once

#include <string>
#include <vector>

#include "parkgrid/scenario.hpp"

namespace parkgrid {

// Battery rating and economics. Either the power or the capacity may be zero;
// such a battery simply never acts.
struct StorageSpec {
    double power_kw = 0.0;
    double capacity_kwh = 0.0;
    double soc_min_frac = 0.10;
    double soc_max_frac = 0.90;
    double efficiency = 0.95;  // applied on both the charge and discharge leg
    double lifetime_years = 10.0;
    double power_unit_cost_cny_per_kw = 800.0;
    double energy_unit_cost_cny_per_kwh = 1800.0;

    double soc_min_kwh() const { return soc_min_frac * capacity_kwh; }
    double soc_max_kwh() const { return soc_max_frac * capacity_kwh; }
};

struct DispatchStep {
    std::size_t t = 0;
    double net_load_kw = 0.0;  // load - pv - wind, before the battery acts
    double charge_kw = 0.0;
    double discharge_kw = 0.0;
    double soc_kwh_after = 0.0;
    double grid_import_kw = 0.0;
    double curtailment_kw = 0.0;
};

struct DispatchTrace {
    std::vector<DispatchStep> steps;
    double initial_soc_kwh = 0.0;
    StorageSpec spec;
    double step_hours = 1.0;

    double horizon_hours() const { return static_cast<double>(steps.size()) * step_hours; }
};

void validate(const StorageSpec& spec);

// Net load of one step; negative means renewable surplus.
double net_load(double load_kw, double pv_kw, double wind_kw);

// Greedy single-step rule. Deficit: discharge up to the power rating and the
// energy above the SOC floor; the residual is imported from the grid.
// Surplus: charge up to the power rating and the headroom below the SOC
// ceiling; the residual is curtailed. Delivered energy drains soc by
// dch*dt/eta, absorbed energy deposits ch*dt*eta, so losses appear in the
// SOC update and never on the bus.
DispatchStep step_dispatch(double net_load_kw, double soc_kwh, const StorageSpec& spec,
                           double step_hours);

// Runs step_dispatch over the whole horizon, carrying SOC between steps.
// initial_soc_frac is a fraction of capacity and must lie inside the SOC band.
DispatchTrace simulate(const ParkScenario& scenario, const StorageSpec& spec,
                       double initial_soc_frac = 0.5);

// CSV export: t,net_load_kw,charge_kw,discharge_kw,soc_kwh,grid_import_kw,curtailment_kw
void write_trace_csv(const DispatchTrace& trace, const std::string& path);

}  // namespace parkgrid
