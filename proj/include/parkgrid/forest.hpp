#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace parkgrid {

struct Dataset {
    std::vector<std::vector<double>> rows;  // rows[sample][feature]
    std::vector<double> target;
    std::vector<std::string> feature_names;

    std::size_t n_samples() const { return rows.size(); }
    std::size_t n_features() const { return feature_names.size(); }
};

void validate(const Dataset& data);

// Node layout: internal nodes carry a (feature, threshold) test with
// x[feature] <= threshold routing left; leaves carry the mean target of the
// training samples routed to them. feature < 0 marks a leaf.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> x) const;
};

struct TrainConfig {
    int n_trees = 100;
    int max_depth = 8;
    int min_samples_leaf = 2;
    int features_per_split = 0;  // 0 = ceil(n_features / 3)
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

struct Forest {
    std::vector<RegressionTree> trees;
    std::uint64_t seed = 0;
    TrainConfig config;
    std::size_t n_features = 0;
};

struct LinearModel {
    double intercept = 0.0;
    std::vector<double> coefficients;
    double residual_std = 0.0;
};

// Bagged variance-reduction trees. Each tree trains on its own bootstrap
// sample (or the full data when bootstrap is off) and considers a random
// feature subset at every split; split thresholds are midpoints between
// consecutive distinct values. Per-tree RNG streams are derived from
// (seed, tree index), so the result is a pure function of (data, config).
Forest fit_forest(const Dataset& data, const TrainConfig& config);

// Mean of the individual tree predictions.
double predict(const Forest& forest, std::span<const double> x);

// Ordinary least squares with an intercept, via Householder QR. Throws on a
// rank-deficient design matrix.
LinearModel fit_linear(const Dataset& data);

double predict(const LinearModel& model, std::span<const double> x);

// Mean increase in MSE when one feature column is shuffled, averaged over
// `repeats` shuffles; sorted by importance, descending. Deterministic for a
// fixed seed.
std::vector<std::pair<std::string, double>> permutation_importance(const Forest& forest,
                                                                   const Dataset& data,
                                                                   int repeats,
                                                                   std::uint64_t seed);

// CSV export: feature,importance (descending).
void write_importance_csv(const std::vector<std::pair<std::string, double>>& importance,
                          const std::string& path);

}  // namespace parkgrid
