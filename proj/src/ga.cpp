#include "parkgrid/ga.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace parkgrid {

namespace {

double clamp(double v, const std::pair<double, double>& bounds) {
    return std::min(std::max(v, bounds.first), bounds.second);
}

bool within(const Individual& ind, const GaConfig& config) {
    return ind.power_kw >= config.power_bounds.first &&
           ind.power_kw <= config.power_bounds.second &&
           ind.capacity_kwh >= config.capacity_bounds.first &&
           ind.capacity_kwh <= config.capacity_bounds.second;
}

StorageSpec spec_for(const Individual& ind) {
    StorageSpec spec;
    spec.power_kw = ind.power_kw;
    spec.capacity_kwh = ind.capacity_kwh;
    return spec;
}

}  // namespace

void validate(const GaConfig& config) {
    if (config.population_size < 2)
        throw std::runtime_error("ga config: population_size must be >= 2");
    if (config.generations < 1) throw std::runtime_error("ga config: generations must be >= 1");
    if (config.crossover_rate < 0.0 || config.crossover_rate > 1.0)
        throw std::runtime_error("ga config: crossover_rate must be in [0,1]");
    if (config.mutation_rate < 0.0 || config.mutation_rate > 1.0)
        throw std::runtime_error("ga config: mutation_rate must be in [0,1]");
    if (config.power_bounds.first < 0.0 || config.power_bounds.first > config.power_bounds.second)
        throw std::runtime_error("ga config: bad power bounds");
    if (config.capacity_bounds.first < 0.0 ||
        config.capacity_bounds.first > config.capacity_bounds.second)
        throw std::runtime_error("ga config: bad capacity bounds");
    if (config.elitism_count < 0 || config.elitism_count >= config.population_size)
        throw std::runtime_error("ga config: elitism_count must be below population_size");
    if (config.tournament_size < 2)
        throw std::runtime_error("ga config: tournament_size must be >= 2");
    if (static_cast<int>(config.initial_population.size()) > config.population_size)
        throw std::runtime_error("ga config: more injected individuals than population slots");
    for (const auto& ind : config.initial_population)
        if (!within(ind, config))
            throw std::runtime_error("ga config: injected individual outside bounds");
}

double fitness(const Individual& individual, const ParkScenario& scenario,
               const PriceSchedule& prices) {
    DispatchTrace trace = simulate(scenario, spec_for(individual), 0.5);
    CostBreakdown cb = supply_cost(trace, scenario, prices);
    return cb.total_cny / (trace.horizon_hours() / 24.0);
}

double capital_proxy_cost(const Individual& individual) {
    return individual.power_kw * 100.0 + individual.capacity_kwh * 100.0;
}

std::pair<Individual, Individual> crossover(const Individual& p1, const Individual& p2,
                                            double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("crossover: alpha must be in [0,1]");
    Individual c1{alpha * p1.power_kw + (1.0 - alpha) * p2.power_kw,
                  alpha * p1.capacity_kwh + (1.0 - alpha) * p2.capacity_kwh};
    Individual c2{(1.0 - alpha) * p1.power_kw + alpha * p2.power_kw,
                  (1.0 - alpha) * p1.capacity_kwh + alpha * p2.capacity_kwh};
    return {c1, c2};
}

Individual mutate(const Individual& individual, std::mt19937_64& rng, const GaConfig& config) {
    Individual out = individual;
    std::uniform_int_distribution<int> gene(0, 1);
    if (gene(rng) == 0) {
        std::uniform_real_distribution<double> draw(config.power_bounds.first,
                                                    config.power_bounds.second);
        out.power_kw = draw(rng);
    } else {
        std::uniform_real_distribution<double> draw(config.capacity_bounds.first,
                                                    config.capacity_bounds.second);
        out.capacity_kwh = draw(rng);
    }
    return out;
}

GaResult optimize(const ParkScenario& scenario, const PriceSchedule& prices,
                  const GaConfig& config) {
    validate(config);
    validate(scenario);

    auto evaluate = [&](const Individual& ind) {
        if (!within(ind, config))
            throw std::logic_error("ga: evaluated individual escaped the search bounds");
        return config.capital_proxy_fitness ? capital_proxy_cost(ind)
                                            : fitness(ind, scenario, prices);
    };

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> power_draw(config.power_bounds.first,
                                                      config.power_bounds.second);
    std::uniform_real_distribution<double> capacity_draw(config.capacity_bounds.first,
                                                         config.capacity_bounds.second);

    const std::size_t pop_size = static_cast<std::size_t>(config.population_size);
    std::vector<Individual> population = config.initial_population;
    if (population.empty()) {
        // Always evaluate the no-storage corner so the search cannot end up
        // worse than leaving the park without a battery.
        population.push_back(Individual{clamp(0.0, config.power_bounds),
                                        clamp(0.0, config.capacity_bounds)});
    }
    while (population.size() < pop_size)
        population.push_back(Individual{power_draw(rng), capacity_draw(rng)});

    std::vector<double> cost(pop_size);
    GaResult result;
    result.best_cost = std::numeric_limits<double>::infinity();

    auto evaluate_population = [&]() {
        double sum = 0.0;
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < pop_size; ++i) {
            cost[i] = evaluate(population[i]);
            sum += cost[i];
            if (cost[i] < cost[best_i]) best_i = i;
            if (cost[i] < result.best_cost) {
                result.best_cost = cost[i];
                result.best = population[i];
            }
        }
        result.history.push_back({cost[best_i], sum / static_cast<double>(pop_size)});
    };

    auto tournament = [&]() -> const Individual& {
        std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
        std::size_t best = pick(rng);
        for (int k = 1; k < config.tournament_size; ++k) {
            std::size_t challenger = pick(rng);
            if (cost[challenger] < cost[best]) best = challenger;
        }
        return population[best];
    };

    evaluate_population();

    for (int gen = 0; gen < config.generations; ++gen) {
        std::vector<Individual> next;
        next.reserve(pop_size);

        if (config.elitism_count > 0) {
            std::vector<std::size_t> order(pop_size);
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
            for (int e = 0; e < config.elitism_count; ++e)
                next.push_back(population[order[e]]);
        }

        // The blend is convex, but rounding can land a child one ulp outside
        // the box; snap back so every evaluated individual stays feasible.
        auto snap = [&](Individual ind) {
            ind.power_kw = clamp(ind.power_kw, config.power_bounds);
            ind.capacity_kwh = clamp(ind.capacity_kwh, config.capacity_bounds);
            return ind;
        };

        while (next.size() < pop_size) {
            Individual p1 = tournament();
            Individual p2 = tournament();
            Individual c1 = p1, c2 = p2;
            if (unit(rng) < config.crossover_rate) {
                double alpha = unit(rng);
                std::tie(c1, c2) = crossover(p1, p2, alpha);
            }
            if (unit(rng) < config.mutation_rate) c1 = mutate(c1, rng, config);
            if (unit(rng) < config.mutation_rate) c2 = mutate(c2, rng, config);
            next.push_back(snap(c1));
            if (next.size() < pop_size) next.push_back(snap(c2));
        }

        population = std::move(next);
        evaluate_population();
    }
    return result;
}

GridSearchResult grid_search(const ParkScenario& scenario, const PriceSchedule& prices,
                             double power_min, double power_max, double power_step,
                             double capacity_min, double capacity_max, double capacity_step,
                             bool capital_proxy) {
    if (power_min < 0.0 || power_max < power_min || capacity_min < 0.0 ||
        capacity_max < capacity_min)
        throw std::invalid_argument("grid_search: bad bounds");
    if (!(power_step > 0.0) || !(capacity_step > 0.0))
        throw std::invalid_argument("grid_search: steps must be positive");

    auto count = [](double lo, double hi, double step) {
        return static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    };
    const std::size_t np = count(power_min, power_max, power_step);
    const std::size_t nc = count(capacity_min, capacity_max, capacity_step);

    GridSearchResult result;
    result.best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = 0; j < nc; ++j) {
            Individual ind{power_min + static_cast<double>(i) * power_step,
                           capacity_min + static_cast<double>(j) * capacity_step};
            double c = capital_proxy ? capital_proxy_cost(ind) : fitness(ind, scenario, prices);
            ++result.evaluations;
            if (c < result.best_cost) {
                result.best_cost = c;
                result.best = ind;
            }
        }
    }
    return result;
}

void write_history_csv(const GaResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write history file '" + path + "'");
    out << "generation,best_cost,mean_cost\n";
    char buf[96];
    for (std::size_t g = 0; g < result.history.size(); ++g) {
        std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g\n", g, result.history[g].best_cost,
                      result.history[g].mean_cost);
        out << buf;
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace parkgrid
