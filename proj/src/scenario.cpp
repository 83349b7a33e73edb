#include "parkgrid/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace parkgrid {

namespace {

constexpr double kPuTolerance = 1e-6;

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Strict double parse: the whole field must be consumed.
double parse_number(const std::string& field, const std::string& what, std::size_t row) {
    try {
        std::size_t pos = 0;
        double v = std::stod(field, &pos);
        while (pos < field.size() && std::isspace(static_cast<unsigned char>(field[pos]))) ++pos;
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("row " + std::to_string(row) + ": malformed " + what +
                                 " value '" + field + "'");
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

void validate(const TimeSeries& ts, const std::string& name) {
    if (ts.values.empty()) throw std::runtime_error(name + ": series is empty");
    if (!(ts.step_hours > 0.0))
        throw std::runtime_error(name + ": step_hours must be positive");
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
        double v = ts.values[i];
        if (!std::isfinite(v) || v < 0.0)
            throw std::runtime_error(name + ": value at step " + std::to_string(i) +
                                     " is negative or non-finite");
    }
}

void validate(const ParkScenario& scenario) {
    validate(scenario.load, "load");
    validate(scenario.pv, "pv");
    validate(scenario.wind, "wind");
    if (scenario.pv.size() != scenario.load.size() || scenario.wind.size() != scenario.load.size())
        throw std::runtime_error("scenario '" + scenario.park_id +
                                 "': load/pv/wind lengths differ");
    if (scenario.pv.step_hours != scenario.load.step_hours ||
        scenario.wind.step_hours != scenario.load.step_hours)
        throw std::runtime_error("scenario '" + scenario.park_id +
                                 "': load/pv/wind step_hours differ");
    if (scenario.pv_capacity_kw < 0.0 || scenario.wind_capacity_kw < 0.0)
        throw std::runtime_error("scenario '" + scenario.park_id +
                                 "': installed capacity must be >= 0");
    for (std::size_t i = 0; i < scenario.steps(); ++i) {
        double pv_cap = scenario.pv_capacity_kw * (1.0 + kPuTolerance);
        double wind_cap = scenario.wind_capacity_kw * (1.0 + kPuTolerance);
        if (scenario.pv.values[i] > pv_cap)
            throw std::runtime_error("scenario '" + scenario.park_id + "': pv at step " +
                                     std::to_string(i) + " exceeds installed capacity");
        if (scenario.wind.values[i] > wind_cap)
            throw std::runtime_error("scenario '" + scenario.park_id + "': wind at step " +
                                     std::to_string(i) + " exceeds installed capacity");
    }
    if (scenario.pv_pu.size() != scenario.steps() || scenario.wind_pu.size() != scenario.steps())
        throw std::runtime_error("scenario '" + scenario.park_id +
                                 "': per-unit source columns out of sync");
}

void validate(const PriceSchedule& prices) {
    for (std::size_t h = 0; h < prices.grid_price_cny_per_kwh.size(); ++h) {
        double p = prices.grid_price_cny_per_kwh[h];
        if (!std::isfinite(p) || p < 0.0)
            throw std::runtime_error("grid price for hour " + std::to_string(h) +
                                     " is negative or non-finite");
    }
    if (!std::isfinite(prices.wind_unit_cost_cny_per_kwh) || prices.wind_unit_cost_cny_per_kwh < 0.0)
        throw std::runtime_error("wind_unit_cost is negative or non-finite");
    if (!std::isfinite(prices.solar_unit_cost_cny_per_kwh) ||
        prices.solar_unit_cost_cny_per_kwh < 0.0)
        throw std::runtime_error("solar_unit_cost is negative or non-finite");
}

ParkScenario load_scenario(const std::string& path, double pv_capacity_kw,
                           double wind_capacity_kw, std::optional<std::size_t> expected_hours) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file '" + path + "'");
    if (pv_capacity_kw < 0.0 || wind_capacity_kw < 0.0)
        throw std::invalid_argument("installed capacities must be >= 0");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("'" + path + "': empty file");
    if (strip(line) != "hour,load_kw,pv_pu,wind_pu")
        throw std::runtime_error("'" + path + "': expected header 'hour,load_kw,pv_pu,wind_pu'");

    ParkScenario scenario;
    scenario.park_id = path;
    scenario.pv_capacity_kw = pv_capacity_kw;
    scenario.wind_capacity_kw = wind_capacity_kw;

    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (strip(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     " has " + std::to_string(fields.size()) +
                                     " fields, expected 4");
        double hour = parse_number(strip(fields[0]), "hour", row);
        if (hour != static_cast<double>(row))
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     " has hour index " + strip(fields[0]) +
                                     ", expected " + std::to_string(row));
        double load = parse_number(strip(fields[1]), "load_kw", row);
        double pv_pu = parse_number(strip(fields[2]), "pv_pu", row);
        double wind_pu = parse_number(strip(fields[3]), "wind_pu", row);
        if (load < 0.0)
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": negative load_kw");
        if (pv_pu < 0.0 || wind_pu < 0.0)
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": negative per-unit value");
        if (pv_pu > 1.0 + kPuTolerance)
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": pv_pu exceeds 1");
        if (wind_pu > 1.0 + kPuTolerance)
            throw std::runtime_error("'" + path + "': row " + std::to_string(row) +
                                     ": wind_pu exceeds 1");
        scenario.load.values.push_back(load);
        scenario.pv_pu.push_back(pv_pu);
        scenario.wind_pu.push_back(wind_pu);
        scenario.pv.values.push_back(pv_pu * pv_capacity_kw);
        scenario.wind.values.push_back(wind_pu * wind_capacity_kw);
        ++row;
    }
    if (expected_hours && row != *expected_hours)
        throw std::runtime_error("'" + path + "': row count mismatch, file has " +
                                 std::to_string(row) + " rows but " +
                                 std::to_string(*expected_hours) + " were expected");
    validate(scenario);
    return scenario;
}

void write_scenario_csv(const ParkScenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file '" + path + "'");
    out << "hour,load_kw,pv_pu,wind_pu\n";
    for (std::size_t t = 0; t < scenario.steps(); ++t) {
        out << t << ',' << fmt_full(scenario.load.values[t]) << ',' << fmt_full(scenario.pv_pu[t])
            << ',' << fmt_full(scenario.wind_pu[t]) << '\n';
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ParkScenario synth_scenario(std::uint64_t seed, std::size_t hours, Profile profile) {
    if (hours < 1) throw std::invalid_argument("synth_scenario: hours must be >= 1");

    double pv_capacity = 0.0, wind_capacity = 0.0;
    switch (profile) {
        case Profile::SolarHeavy: pv_capacity = 400.0; wind_capacity = 80.0; break;
        case Profile::WindHeavy:  pv_capacity = 80.0;  wind_capacity = 400.0; break;
        case Profile::Mixed:      pv_capacity = 250.0; wind_capacity = 250.0; break;
    }
    const double max_load = 500.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(0.85, 1.0);

    ParkScenario scenario;
    scenario.park_id = std::string("synth-") + to_string(profile) + "-seed" + std::to_string(seed);
    scenario.pv_capacity_kw = pv_capacity;
    scenario.wind_capacity_kw = wind_capacity;

    for (std::size_t t = 0; t < hours; ++t) {
        int h = static_cast<int>(t % 24);

        // Load: low at night, morning ramp, midday plateau, evening shoulder.
        double load_shape = 0.30;
        if (h >= 7 && h <= 11) load_shape = 0.45 + 0.10 * (h - 7);
        else if (h >= 12 && h <= 17) load_shape = 0.85;
        else if (h >= 18 && h <= 21) load_shape = 0.65;
        double load = max_load * load_shape * jitter(rng);

        // PV: daylight bell between 07:00 and 19:00, exactly zero otherwise.
        double pv_pu = 0.0;
        if (h >= 7 && h < 19) {
            double x = (h - 7 + 0.5) / 12.0;  // 0..1 across the daylight window
            pv_pu = std::sin(M_PI * x);
            pv_pu = pv_pu * pv_pu * jitter(rng);
        }

        // Wind: stronger at night than during the day.
        double wind_base = (h < 7 || h >= 19) ? 0.65 : 0.30;
        double wind_pu = wind_base * jitter(rng);

        if (profile == Profile::SolarHeavy) wind_pu *= 0.6;
        if (profile == Profile::WindHeavy) pv_pu *= 0.6;

        scenario.load.values.push_back(load);
        scenario.pv_pu.push_back(pv_pu);
        scenario.wind_pu.push_back(wind_pu);
        scenario.pv.values.push_back(pv_pu * pv_capacity);
        scenario.wind.values.push_back(wind_pu * wind_capacity);
    }
    validate(scenario);
    return scenario;
}

PriceSchedule load_prices(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open prices file '" + path + "'");

    PriceSchedule prices;
    std::array<bool, 24> have_hour{};
    bool have_wind = false, have_solar = false;

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = strip(line);
        if (s.empty() || s[0] == '#') continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        std::string key = strip(s.substr(0, eq));
        std::string value = strip(s.substr(eq + 1));
        double v = parse_number(value, key, line_no);

        if (key.rfind("grid_price_hour_", 0) == 0) {
            std::string idx = key.substr(16);
            if (idx.size() != 2 || !std::isdigit(static_cast<unsigned char>(idx[0])) ||
                !std::isdigit(static_cast<unsigned char>(idx[1])))
                throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                                         ": bad grid price key '" + key + "'");
            int h = (idx[0] - '0') * 10 + (idx[1] - '0');
            if (h > 23)
                throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                                         ": hour out of range in '" + key + "'");
            prices.grid_price_cny_per_kwh[h] = v;
            have_hour[h] = true;
        } else if (key == "wind_unit_cost") {
            prices.wind_unit_cost_cny_per_kwh = v;
            have_wind = true;
        } else if (key == "solar_unit_cost") {
            prices.solar_unit_cost_cny_per_kwh = v;
            have_solar = true;
        } else {
            throw std::runtime_error("'" + path + "' line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    for (int h = 0; h < 24; ++h)
        if (!have_hour[h])
            throw std::runtime_error("'" + path + "': missing grid_price_hour_" +
                                     (h < 10 ? "0" : "") + std::to_string(h));
    if (!have_wind) throw std::runtime_error("'" + path + "': missing wind_unit_cost");
    if (!have_solar) throw std::runtime_error("'" + path + "': missing solar_unit_cost");
    validate(prices);
    return prices;
}

const char* to_string(Profile profile) {
    switch (profile) {
        case Profile::SolarHeavy: return "solar-heavy";
        case Profile::WindHeavy: return "wind-heavy";
        case Profile::Mixed: return "mixed";
    }
    return "unknown";
}

}  // namespace parkgrid
