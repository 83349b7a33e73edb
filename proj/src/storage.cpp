#include "parkgrid/storage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace parkgrid {

void validate(const StorageSpec& spec) {
    if (!(spec.power_kw >= 0.0) || !std::isfinite(spec.power_kw))
        throw std::runtime_error("storage spec: power_kw must be >= 0");
    if (!(spec.capacity_kwh >= 0.0) || !std::isfinite(spec.capacity_kwh))
        throw std::runtime_error("storage spec: capacity_kwh must be >= 0");
    if (!(spec.soc_min_frac >= 0.0) || !(spec.soc_min_frac < 1.0))
        throw std::runtime_error("storage spec: soc_min_frac must be in [0,1)");
    if (!(spec.soc_max_frac > 0.0) || !(spec.soc_max_frac <= 1.0))
        throw std::runtime_error("storage spec: soc_max_frac must be in (0,1]");
    if (!(spec.soc_min_frac < spec.soc_max_frac))
        throw std::runtime_error("storage spec: soc_min_frac must be below soc_max_frac");
    if (!(spec.efficiency > 0.0) || !(spec.efficiency <= 1.0))
        throw std::runtime_error("storage spec: efficiency must be in (0,1]");
    if (!(spec.lifetime_years > 0.0))
        throw std::runtime_error("storage spec: lifetime_years must be positive");
    if (spec.power_unit_cost_cny_per_kw < 0.0 || spec.energy_unit_cost_cny_per_kwh < 0.0)
        throw std::runtime_error("storage spec: unit costs must be >= 0");
}

double net_load(double load_kw, double pv_kw, double wind_kw) {
    if (!std::isfinite(load_kw) || !std::isfinite(pv_kw) || !std::isfinite(wind_kw))
        throw std::invalid_argument("net_load: inputs must be finite");
    return load_kw - pv_kw - wind_kw;
}

DispatchStep step_dispatch(double net_load_kw, double soc_kwh, const StorageSpec& spec,
                           double step_hours) {
    if (!std::isfinite(net_load_kw) || !std::isfinite(soc_kwh))
        throw std::invalid_argument("step_dispatch: inputs must be finite");
    if (!(step_hours > 0.0)) throw std::invalid_argument("step_dispatch: step_hours must be > 0");

    DispatchStep step;
    step.net_load_kw = net_load_kw;
    step.soc_kwh_after = soc_kwh;

    if (net_load_kw > 0.0) {
        double energy_cap = std::max(0.0, soc_kwh - spec.soc_min_kwh()) * spec.efficiency / step_hours;
        step.discharge_kw = std::min({net_load_kw, spec.power_kw, energy_cap});
        step.soc_kwh_after = soc_kwh - step.discharge_kw * step_hours / spec.efficiency;
        step.grid_import_kw = net_load_kw - step.discharge_kw;
    } else if (net_load_kw < 0.0) {
        double surplus = -net_load_kw;
        double headroom = std::max(0.0, spec.soc_max_kwh() - soc_kwh) / (spec.efficiency * step_hours);
        step.charge_kw = std::min({surplus, spec.power_kw, headroom});
        step.soc_kwh_after = soc_kwh + step.charge_kw * step_hours * spec.efficiency;
        step.curtailment_kw = surplus - step.charge_kw;
    }
    return step;
}

DispatchTrace simulate(const ParkScenario& scenario, const StorageSpec& spec,
                       double initial_soc_frac) {
    validate(scenario);
    validate(spec);
    if (initial_soc_frac < spec.soc_min_frac || initial_soc_frac > spec.soc_max_frac)
        throw std::runtime_error("simulate: initial_soc_frac outside the SOC band");

    DispatchTrace trace;
    trace.spec = spec;
    trace.step_hours = scenario.step_hours();
    trace.initial_soc_kwh = initial_soc_frac * spec.capacity_kwh;
    trace.steps.reserve(scenario.steps());

    double soc = trace.initial_soc_kwh;
    for (std::size_t t = 0; t < scenario.steps(); ++t) {
        double nl = net_load(scenario.load.values[t], scenario.pv.values[t],
                             scenario.wind.values[t]);
        DispatchStep step = step_dispatch(nl, soc, spec, trace.step_hours);
        step.t = t;
        soc = step.soc_kwh_after;
        trace.steps.push_back(step);
    }
    return trace;
}

void write_trace_csv(const DispatchTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write trace file '" + path + "'");
    out << "t,net_load_kw,charge_kw,discharge_kw,soc_kwh,grid_import_kw,curtailment_kw\n";
    char buf[256];
    for (const auto& s : trace.steps) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", s.t,
                      s.net_load_kw, s.charge_kw, s.discharge_kw, s.soc_kwh_after,
                      s.grid_import_kw, s.curtailment_kw);
        out << buf;
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace parkgrid
