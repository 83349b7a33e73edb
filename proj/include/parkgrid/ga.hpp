#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "parkgrid/costing.hpp"
#include "parkgrid/scenario.hpp"
#include "parkgrid/storage.hpp"

namespace parkgrid {

// One candidate storage configuration.
struct Individual {
    double power_kw = 0.0;
    double capacity_kwh = 0.0;
};

struct GaConfig {
    int population_size = 40;
    int generations = 60;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::pair<double, double> power_bounds{0.0, 100.0};
    std::pair<double, double> capacity_bounds{0.0, 200.0};
    int elitism_count = 1;
    int tournament_size = 2;
    std::uint64_t seed = 0;
    // Replace the supply-cost objective with the capital proxy
    // capital_proxy_cost below. Mostly useful to show why the proxy cannot
    // distinguish storage configurations by operating value.
    bool capital_proxy_fitness = false;
    // Individuals injected into generation 0 (must fit within bounds); the
    // remainder of the population is drawn uniformly.
    std::vector<Individual> initial_population;
};

struct GenerationStats {
    double best_cost = 0.0;
    double mean_cost = 0.0;
};

struct GaResult {
    Individual best;
    double best_cost = 0.0;  // CNY/day, lower is better
    std::vector<GenerationStats> history;  // entry 0 is the initial population
};

struct GridSearchResult {
    Individual best;
    double best_cost = 0.0;
    std::size_t evaluations = 0;
};

void validate(const GaConfig& config);

// Daily total supply cost of the candidate configuration: builds a
// StorageSpec with default SOC band / efficiency / lifetime, dispatches the
// scenario from 50% initial SOC and divides the total cost by the number of
// days. Lower is better.
double fitness(const Individual& individual, const ParkScenario& scenario,
               const PriceSchedule& prices);

// Flat capital proxy (100 CNY per kW plus 100 CNY per kWh). Monotone in both
// genes, so on its own it always prefers the smallest allowed storage.
double capital_proxy_cost(const Individual& individual);

// Arithmetic blend: child1 = a*p1 + (1-a)*p2, child2 = (1-a)*p1 + a*p2,
// componentwise. Convex, so children stay within any box the parents satisfy.
std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double alpha);

// Redraws exactly one gene (power or capacity, equal probability) uniformly
// within its bounds; the other gene is untouched.
Individual mutate(const Individual& individual, std::mt19937_64& rng, const GaConfig& config);

// Tournament selection + blend crossover + single-gene mutation with
// elitism. Deterministic for a fixed config. Generation 0 always contains
// the no-storage corner (clamped to bounds) unless initial_population is
// given, so the result is never worse than that baseline.
GaResult optimize(const ParkScenario& scenario, const PriceSchedule& prices,
                  const GaConfig& config);

// Exhaustive reference search over a regular (power, capacity) grid with the
// same objective as the GA. Ties resolve to the lowest power, then capacity.
GridSearchResult grid_search(const ParkScenario& scenario, const PriceSchedule& prices,
                             double power_min, double power_max, double power_step,
                             double capacity_min, double capacity_max, double capacity_step,
                             bool capital_proxy = false);

// CSV export: generation,best_cost,mean_cost
void write_history_csv(const GaResult& result, const std::string& path);

}  // namespace parkgrid
