#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace parkgrid {

// Hourly (by default) series of non-negative kW samples.
struct TimeSeries {
    std::vector<double> values;
    double step_hours = 1.0;

    std::size_t size() const { return values.size(); }
    double horizon_hours() const { return static_cast<double>(values.size()) * step_hours; }
};

// One park: load plus renewable generation, all series aligned on the same
// time grid. pv/wind are stored in kW; the per-unit source columns are kept
// so a scenario can be re-serialized without losing the original values.
struct ParkScenario {
    std::string park_id;
    TimeSeries load;  // kW
    TimeSeries pv;    // kW
    TimeSeries wind;  // kW
    double pv_capacity_kw = 0.0;
    double wind_capacity_kw = 0.0;
    std::vector<double> pv_pu;    // source column, pv = pv_pu * pv_capacity_kw
    std::vector<double> wind_pu;  // source column, wind = wind_pu * wind_capacity_kw

    std::size_t steps() const { return load.size(); }
    double step_hours() const { return load.step_hours; }
    double horizon_hours() const { return load.horizon_hours(); }
};

// Unit prices for the three supply sources. The grid tariff is hour-of-day
// indexed so time-of-use schedules are representable; a flat tariff repeats
// one value 24 times.
struct PriceSchedule {
    std::array<double, 24> grid_price_cny_per_kwh{};
    double wind_unit_cost_cny_per_kwh = 0.0;
    double solar_unit_cost_cny_per_kwh = 0.0;
};

enum class Profile { SolarHeavy, WindHeavy, Mixed };

// Throw std::runtime_error with a descriptive message on any violated invariant.
void validate(const TimeSeries& ts, const std::string& name);
void validate(const ParkScenario& scenario);
void validate(const PriceSchedule& prices);

// Reads `hour,load_kw,pv_pu,wind_pu` CSV (header required, hour is the
// 0-based row index). Per-unit columns are scaled by the installed
// capacities. If expected_hours is set, a file with a different row count is
// rejected. Errors name the offending row.
ParkScenario load_scenario(const std::string& path, double pv_capacity_kw,
                           double wind_capacity_kw,
                           std::optional<std::size_t> expected_hours = std::nullopt);

// Writes the same CSV schema load_scenario reads, at full double precision.
void write_scenario_csv(const ParkScenario& scenario, const std::string& path);

// Deterministic synthetic park for a given seed. Solar-heavy parks have zero
// PV outside 07:00-19:00; wind-heavy parks generate more at night.
ParkScenario synth_scenario(std::uint64_t seed, std::size_t hours, Profile profile);

// Key-value config with keys grid_price_hour_00..grid_price_hour_23,
// wind_unit_cost and solar_unit_cost. Lines starting with '#' are comments.
PriceSchedule load_prices(const std::string& path);

const char* to_string(Profile profile);

}  // namespace parkgrid
