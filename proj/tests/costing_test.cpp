#include "parkgrid/costing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"

using namespace parkgrid;
using testutil::flat_prices;
using testutil::make_scenario;

namespace {

StorageSpec spec_of(double power, double capacity) {
    StorageSpec spec;
    spec.power_kw = power;
    spec.capacity_kwh = capacity;
    return spec;
}

// Direct no-storage supply cost computed straight from the scenario, without
// any dispatch trace: grid covers every deficit, every surplus is curtailed.
CostBreakdown no_storage_cost_direct(const ParkScenario& s, const PriceSchedule& prices) {
    CostBreakdown cb;
    const double dt = s.step_hours();
    for (std::size_t t = 0; t < s.steps(); ++t) {
        double pv = s.pv.values[t], wind = s.wind.values[t];
        double nl = s.load.values[t] - pv - wind;
        double grid = std::max(nl, 0.0);
        double curtail = std::max(-nl, 0.0);
        double gen = pv + wind;
        double pv_used = pv, wind_used = wind;
        if (curtail > 0 && gen > 0) {
            pv_used = pv - curtail * pv / gen;
            wind_used = wind - curtail * wind / gen;
        }
        cb.grid_cost_cny += grid * dt * prices.grid_price_cny_per_kwh[hour_of_day(t, dt)];
        cb.solar_cost_cny += pv_used * dt * prices.solar_unit_cost_cny_per_kwh;
        cb.wind_cost_cny += wind_used * dt * prices.wind_unit_cost_cny_per_kwh;
    }
    cb.storage_cost_cny = 0.0;
    cb.total_cny = cb.grid_cost_cny + cb.wind_cost_cny + cb.solar_cost_cny;
    return cb;
}

}  // namespace

TEST(CapitalCost, PowerCost) {
    EXPECT_DOUBLE_EQ(power_cost(spec_of(50, 0)), 40000.0);
    EXPECT_DOUBLE_EQ(power_cost(spec_of(0, 0)), 0.0);
    EXPECT_DOUBLE_EQ(power_cost(spec_of(60, 0)), 48000.0);
}

TEST(CapitalCost, EnergyCost) {
    EXPECT_DOUBLE_EQ(energy_cost(spec_of(0, 100)), 180000.0);
    EXPECT_DOUBLE_EQ(energy_cost(spec_of(0, 0)), 0.0);
    EXPECT_DOUBLE_EQ(energy_cost(spec_of(0, 140)), 252000.0);
}

TEST(CapitalCost, AmortizedPerHour) {
    EXPECT_NEAR(amortized_storage_cost_per_hour(spec_of(50, 100)), 220000.0 / 87600.0, 1e-12);
    EXPECT_NEAR(amortized_storage_cost_per_hour(spec_of(50, 100)), 2.5114155, 1e-6);
    EXPECT_DOUBLE_EQ(amortized_storage_cost_per_hour(spec_of(0, 0)), 0.0);
    EXPECT_NEAR(amortized_storage_cost_per_hour(spec_of(40, 140)), 284000.0 / 87600.0, 1e-12);
    EXPECT_NEAR(amortized_storage_cost_per_hour(spec_of(40, 140)), 3.2420091, 1e-6);
}

TEST(CapitalCost, AmortizationIsLinearInEachParameter) {
    double base = amortized_storage_cost_per_hour(spec_of(10, 20));
    double power_doubled = amortized_storage_cost_per_hour(spec_of(20, 20));
    double cap_doubled = amortized_storage_cost_per_hour(spec_of(10, 40));
    double power_only = amortized_storage_cost_per_hour(spec_of(10, 0));
    double cap_only = amortized_storage_cost_per_hour(spec_of(0, 20));
    EXPECT_NEAR(power_doubled - base, power_only, 1e-12);
    EXPECT_NEAR(cap_doubled - base, cap_only, 1e-12);
    EXPECT_NEAR(base, power_only + cap_only, 1e-12);
}

TEST(SupplyCost, FlatLoadGridOnly) {
    std::vector<double> load(24, 100.0), zero(24, 0.0);
    ParkScenario s = make_scenario(load, zero, zero, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    CostBreakdown cb = supply_cost(trace, s, flat_prices(1.0, 0.5, 0.4));
    EXPECT_NEAR(cb.grid_cost_cny, 2400.0, 1e-9);
    EXPECT_DOUBLE_EQ(cb.wind_cost_cny, 0.0);
    EXPECT_DOUBLE_EQ(cb.solar_cost_cny, 0.0);
    EXPECT_DOUBLE_EQ(cb.storage_cost_cny, 0.0);
    EXPECT_NEAR(cb.total_cny, 2400.0, 1e-9);
}

TEST(SupplyCost, SingleStepHandComputed) {
    ParkScenario s = make_scenario({100}, {40}, {0}, 100, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    CostBreakdown cb = supply_cost(trace, s, flat_prices(1.0, 0.5, 0.4));
    EXPECT_NEAR(cb.grid_cost_cny, 60.0, 1e-12);
    EXPECT_NEAR(cb.solar_cost_cny, 16.0, 1e-12);
    EXPECT_NEAR(cb.total_cny, 76.0, 1e-12);
}

TEST(SupplyCost, ZeroSizeStorageMatchesDirectComputation) {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        ParkScenario s = testutil::random_scenario(rng);
        PriceSchedule prices = flat_prices(0.9, 0.45, 0.35);
        prices.grid_price_cny_per_kwh[18] = 1.4;  // a little time-of-use structure
        prices.grid_price_cny_per_kwh[19] = 1.4;
        DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
        CostBreakdown via_trace = supply_cost(trace, s, prices);
        CostBreakdown direct = no_storage_cost_direct(s, prices);
        EXPECT_NEAR(via_trace.grid_cost_cny, direct.grid_cost_cny, 1e-9);
        EXPECT_NEAR(via_trace.wind_cost_cny, direct.wind_cost_cny, 1e-9);
        EXPECT_NEAR(via_trace.solar_cost_cny, direct.solar_cost_cny, 1e-9);
        EXPECT_NEAR(via_trace.total_cny, direct.total_cny, 1e-9);
        EXPECT_DOUBLE_EQ(via_trace.storage_cost_cny, 0.0);
    }
}

TEST(SupplyCost, CurtailedEnergyIsNotPaidFor) {
    // Surplus of 60 kW with pv 100 / wind 50: pro-rata split of the curtailment.
    ParkScenario s = make_scenario({90}, {100}, {50}, 100, 50);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    CostBreakdown cb = supply_cost(trace, s, flat_prices(1.0, 0.5, 0.4));
    double pv_used = 100.0 - 60.0 * 100.0 / 150.0;
    double wind_used = 50.0 - 60.0 * 50.0 / 150.0;
    EXPECT_NEAR(cb.solar_cost_cny, pv_used * 0.4, 1e-12);
    EXPECT_NEAR(cb.wind_cost_cny, wind_used * 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(cb.grid_cost_cny, 0.0);
}

TEST(SupplyCost, TimeOfUseUsesHourOfDay) {
    std::vector<double> load(48, 10.0), zero(48, 0.0);
    ParkScenario s = make_scenario(load, zero, zero, 0, 0);
    PriceSchedule prices = flat_prices(0.0, 0, 0);
    prices.grid_price_cny_per_kwh[5] = 2.0;
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    CostBreakdown cb = supply_cost(trace, s, prices);
    // Hour 5 of both days: 10 kW * 1 h * 2 CNY twice.
    EXPECT_NEAR(cb.grid_cost_cny, 40.0, 1e-12);
}

TEST(SupplyCost, StorageSliceScalesWithHorizon) {
    std::vector<double> load(48, 100.0), zero(48, 0.0);
    ParkScenario s = make_scenario(load, zero, zero, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(50, 100), 0.5);
    CostBreakdown cb = supply_cost(trace, s, flat_prices(1.0, 0.5, 0.4));
    EXPECT_NEAR(cb.storage_cost_cny, 48.0 * 220000.0 / 87600.0, 1e-9);
}

TEST(SupplyCost, HorizonMismatchRejected) {
    ParkScenario s = make_scenario({100, 100}, {0, 0}, {0, 0}, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    trace.steps.pop_back();
    EXPECT_THROW(supply_cost(trace, s, flat_prices(1, 0, 0)), std::runtime_error);
}

TEST(SupplyCost, RaisingAGridPriceNeverLowersTotal) {
    std::mt19937_64 rng(55);
    ParkScenario s = testutil::random_scenario(rng);
    DispatchTrace trace = simulate(s, spec_of(30, 60), 0.5);
    PriceSchedule prices = flat_prices(1.0, 0.5, 0.4);
    double base = supply_cost(trace, s, prices).total_cny;
    for (int h = 0; h < 24; ++h) {
        PriceSchedule bumped = prices;
        bumped.grid_price_cny_per_kwh[h] += 0.7;
        EXPECT_GE(supply_cost(trace, s, bumped).total_cny, base - 1e-12);
    }
}

TEST(SupplyCost, BreakdownComponentsSumToTotal) {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        ParkScenario s = testutil::random_scenario(rng);
        StorageSpec spec = testutil::random_spec(rng);
        DispatchTrace trace = simulate(s, spec, 0.5);
        CostBreakdown cb = supply_cost(trace, s, flat_prices(1.1, 0.52, 0.41));
        EXPECT_NEAR(cb.total_cny,
                    cb.grid_cost_cny + cb.wind_cost_cny + cb.solar_cost_cny + cb.storage_cost_cny,
                    1e-9);
        EXPECT_GE(cb.grid_cost_cny, 0.0);
        EXPECT_GE(cb.wind_cost_cny, 0.0);
        EXPECT_GE(cb.solar_cost_cny, 0.0);
        EXPECT_GE(cb.storage_cost_cny, 0.0);
    }
}

TEST(StepCosts, SumMatchesSupplyCostTotal) {
    std::mt19937_64 rng(88);
    for (int rep = 0; rep < 50; ++rep) {
        ParkScenario s = testutil::random_scenario(rng);
        StorageSpec spec = testutil::random_spec(rng);
        DispatchTrace trace = simulate(s, spec, 0.5);
        PriceSchedule prices = flat_prices(1.2, 0.5, 0.4);
        std::vector<double> per_step = step_costs(trace, s, prices);
        double sum = std::accumulate(per_step.begin(), per_step.end(), 0.0);
        EXPECT_NEAR(sum, supply_cost(trace, s, prices).total_cny, 1e-9);
    }
}

TEST(Indicators, ConstantImportSumsPerDay) {
    std::vector<double> load(24, 10.0), zero(24, 0.0);
    ParkScenario s = make_scenario(load, zero, zero, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    EconomicIndicators ind = indicators(trace, s, flat_prices(1.0, 0, 0));
    EXPECT_NEAR(ind.purchased_kwh_per_day, 240.0, 1e-9);
    EXPECT_NEAR(ind.total_cost_cny_per_day, 240.0, 1e-9);
    EXPECT_NEAR(ind.avg_unit_cost_cny_per_kwh, 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(ind.curtailment_kw_per_day, 0.0);
}

TEST(Indicators, MultiDayHorizonNormalizes) {
    std::vector<double> load(72, 10.0), zero(72, 0.0);
    ParkScenario s = make_scenario(load, zero, zero, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    EconomicIndicators ind = indicators(trace, s, flat_prices(1.0, 0, 0));
    EXPECT_NEAR(ind.purchased_kwh_per_day, 240.0, 1e-9);
}

TEST(Indicators, ZeroLoadRejected) {
    std::vector<double> zero(24, 0.0);
    ParkScenario s = make_scenario(zero, zero, zero, 0, 0);
    DispatchTrace trace = simulate(s, spec_of(0, 0), 0.5);
    EXPECT_THROW(indicators(trace, s, flat_prices(1.0, 0, 0)), std::runtime_error);
}

TEST(Indicators, AvgUnitCostDefinition) {
    std::mt19937_64 rng(91);
    ParkScenario s = testutil::random_scenario(rng);
    DispatchTrace trace = simulate(s, spec_of(50, 100), 0.5);
    PriceSchedule prices = flat_prices(1.0, 0.5, 0.4);
    EconomicIndicators ind = indicators(trace, s, prices);
    double load_kwh_per_day = 0.0;
    for (double v : s.load.values) load_kwh_per_day += v;
    load_kwh_per_day /= s.horizon_hours() / 24.0;
    EXPECT_NEAR(ind.avg_unit_cost_cny_per_kwh, ind.total_cost_cny_per_day / load_kwh_per_day,
                1e-12);
}
