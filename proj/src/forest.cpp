#include "parkgrid/forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace parkgrid {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t tree_seed(std::uint64_t forest_seed, int tree_index) {
    return splitmix64(forest_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(tree_index + 1));
}

double subset_mean(const Dataset& data, const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += data.target[i];
    return sum / static_cast<double>(idx.size());
}

double subset_sse(const Dataset& data, const std::vector<std::size_t>& idx, double mean) {
    double sse = 0.0;
    for (std::size_t i : idx) {
        double d = data.target[i] - mean;
        sse += d * d;
    }
    return sse;
}

struct TreeBuilder {
    const Dataset& data;
    int max_depth;
    int min_samples_leaf;
    int mtry;
    std::mt19937_64 rng;
    std::vector<TreeNode> nodes;

    // Draw mtry distinct feature indices, then visit them in ascending order
    // so that equal-quality splits resolve to the lowest feature index.
    std::vector<int> sample_features() {
        std::vector<int> all(data.n_features());
        std::iota(all.begin(), all.end(), 0);
        for (int i = 0; i < mtry; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
            std::swap(all[i], all[pick(rng)]);
        }
        all.resize(mtry);
        std::sort(all.begin(), all.end());
        return all;
    }

    int build(std::vector<std::size_t>& idx, int depth) {
        const double mean = subset_mean(data, idx);
        const double parent_sse = subset_sse(data, idx, mean);

        int node_id = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes[node_id].value = mean;

        if (depth >= max_depth || idx.size() < 2 * static_cast<std::size_t>(min_samples_leaf) ||
            parent_sse <= 0.0)
            return node_id;

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_children_sse = std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, double>> sorted;  // (feature value, target)
        for (int f : sample_features()) {
            sorted.clear();
            for (std::size_t i : idx) sorted.emplace_back(data.rows[i][f], data.target[i]);
            std::sort(sorted.begin(), sorted.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double left_sum = 0.0, left_sq = 0.0;
            double total_sum = 0.0, total_sq = 0.0;
            for (const auto& [v, y] : sorted) {
                total_sum += y;
                total_sq += y * y;
            }
            const std::size_t n = sorted.size();
            for (std::size_t i = 1; i < n; ++i) {
                left_sum += sorted[i - 1].second;
                left_sq += sorted[i - 1].second * sorted[i - 1].second;
                if (sorted[i].first == sorted[i - 1].first) continue;
                std::size_t n_left = i, n_right = n - i;
                if (n_left < static_cast<std::size_t>(min_samples_leaf) ||
                    n_right < static_cast<std::size_t>(min_samples_leaf))
                    continue;
                double right_sum = total_sum - left_sum;
                double right_sq = total_sq - left_sq;
                double sse_left = std::max(0.0, left_sq - left_sum * left_sum / n_left);
                double sse_right = std::max(0.0, right_sq - right_sum * right_sum / n_right);
                double children = sse_left + sse_right;
                // Strict < keeps the first candidate among ties; features and
                // thresholds are visited in ascending order.
                if (children < best_children_sse) {
                    best_children_sse = children;
                    best_feature = f;
                    best_threshold = (sorted[i - 1].first + sorted[i].first) / 2.0;
                }
            }
        }

        // A split must strictly reduce the squared error or the node stays a leaf.
        if (best_feature < 0 || !(parent_sse - best_children_sse > 1e-12 * (parent_sse + 1.0)))
            return node_id;

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (data.rows[i][best_feature] <= best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }

        nodes[node_id].feature = best_feature;
        nodes[node_id].threshold = best_threshold;
        nodes[node_id].left = build(left_idx, depth + 1);
        nodes[node_id].right = build(right_idx, depth + 1);
        return node_id;
    }
};

double forest_mse(const Forest& forest, const std::vector<std::vector<double>>& rows,
                  const std::vector<double>& target) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double d = predict(forest, rows[i]) - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(rows.size());
}

}  // namespace

void validate(const Dataset& data) {
    if (data.n_samples() < 2) throw std::runtime_error("dataset: needs at least 2 samples");
    if (data.target.size() != data.n_samples())
        throw std::runtime_error("dataset: target length differs from sample count");
    if (data.feature_names.empty()) throw std::runtime_error("dataset: no features");
    for (std::size_t i = 0; i < data.n_samples(); ++i) {
        if (data.rows[i].size() != data.n_features())
            throw std::runtime_error("dataset: row " + std::to_string(i) + " has wrong width");
        for (double v : data.rows[i])
            if (!std::isfinite(v))
                throw std::runtime_error("dataset: non-finite feature value in row " +
                                         std::to_string(i));
        if (!std::isfinite(data.target[i]))
            throw std::runtime_error("dataset: non-finite target in row " + std::to_string(i));
    }
}

double RegressionTree::predict(std::span<const double> x) const {
    int node = 0;
    while (!nodes[node].is_leaf())
        node = (x[nodes[node].feature] <= nodes[node].threshold) ? nodes[node].left
                                                                 : nodes[node].right;
    return nodes[node].value;
}

Forest fit_forest(const Dataset& data, const TrainConfig& config) {
    validate(data);
    if (config.n_trees < 1) throw std::runtime_error("train config: n_trees must be >= 1");
    if (config.max_depth < 1) throw std::runtime_error("train config: max_depth must be >= 1");
    if (config.min_samples_leaf < 1)
        throw std::runtime_error("train config: min_samples_leaf must be >= 1");
    const int p = static_cast<int>(data.n_features());
    int mtry = config.features_per_split > 0 ? config.features_per_split : (p + 2) / 3;
    if (mtry > p)
        throw std::runtime_error("train config: features_per_split exceeds feature count");

    Forest forest;
    forest.seed = config.seed;
    forest.config = config;
    forest.n_features = data.n_features();
    forest.trees.reserve(config.n_trees);

    const std::size_t n = data.n_samples();
    for (int j = 0; j < config.n_trees; ++j) {
        TreeBuilder builder{data, config.max_depth, config.min_samples_leaf, mtry,
                            std::mt19937_64(tree_seed(config.seed, j)), {}};
        std::vector<std::size_t> idx(n);
        if (config.bootstrap) {
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (std::size_t i = 0; i < n; ++i) idx[i] = pick(builder.rng);
        } else {
            std::iota(idx.begin(), idx.end(), std::size_t{0});
        }
        builder.build(idx, 0);
        forest.trees.push_back(RegressionTree{std::move(builder.nodes)});
    }
    return forest;
}

double predict(const Forest& forest, std::span<const double> x) {
    if (forest.trees.empty()) throw std::invalid_argument("predict: empty forest");
    if (x.size() != forest.n_features)
        throw std::invalid_argument("predict: feature vector length mismatch");
    double sum = 0.0;
    for (const auto& tree : forest.trees) sum += tree.predict(x);
    return sum / static_cast<double>(forest.trees.size());
}

LinearModel fit_linear(const Dataset& data) {
    validate(data);
    const std::size_t m = data.n_samples();
    const std::size_t q = data.n_features() + 1;  // intercept column first
    if (m < q) throw std::runtime_error("fit_linear: singular design matrix (more columns than rows)");

    // Column-major augmented design for the Householder sweep.
    std::vector<std::vector<double>> a(q, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) {
        a[0][i] = 1.0;
        for (std::size_t k = 1; k < q; ++k) a[k][i] = data.rows[i][k - 1];
    }
    std::vector<double> b = data.target;

    double max_col_norm = 0.0;
    for (std::size_t k = 0; k < q; ++k) {
        double norm = 0.0;
        for (double v : a[k]) norm += v * v;
        max_col_norm = std::max(max_col_norm, std::sqrt(norm));
    }
    const double tol = 1e-10 * std::max(1.0, max_col_norm);

    for (std::size_t k = 0; k < q; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += a[k][i] * a[k][i];
        norm = std::sqrt(norm);
        if (norm <= tol) throw std::runtime_error("fit_linear: singular design matrix");

        double alpha = a[k][k] >= 0.0 ? -norm : norm;
        std::vector<double> v(m - k);
        v[0] = a[k][k] - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = a[k][i];
        double vnorm_sq = 0.0;
        for (double x : v) vnorm_sq += x * x;
        a[k][k] = alpha;
        for (std::size_t i = k + 1; i < m; ++i) a[k][i] = 0.0;
        if (vnorm_sq <= 0.0) continue;

        for (std::size_t c = k + 1; c < q; ++c) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * a[c][i];
            double scale = 2.0 * dot / vnorm_sq;
            for (std::size_t i = k; i < m; ++i) a[c][i] -= scale * v[i - k];
        }
        double dot = 0.0;
        for (std::size_t i = k; i < m; ++i) dot += v[i - k] * b[i];
        double scale = 2.0 * dot / vnorm_sq;
        for (std::size_t i = k; i < m; ++i) b[i] -= scale * v[i - k];
    }

    // Back-substitute R beta = Q^T y.
    std::vector<double> beta(q, 0.0);
    for (std::size_t kk = q; kk-- > 0;) {
        if (std::abs(a[kk][kk]) <= tol)
            throw std::runtime_error("fit_linear: singular design matrix");
        double acc = b[kk];
        for (std::size_t c = kk + 1; c < q; ++c) acc -= a[c][kk] * beta[c];
        beta[kk] = acc / a[kk][kk];
    }

    LinearModel model;
    model.intercept = beta[0];
    model.coefficients.assign(beta.begin() + 1, beta.end());

    double rss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = data.target[i] - predict(model, data.rows[i]);
        rss += r * r;
    }
    model.residual_std = (m > q) ? std::sqrt(rss / static_cast<double>(m - q)) : 0.0;
    return model;
}

double predict(const LinearModel& model, std::span<const double> x) {
    if (x.size() != model.coefficients.size())
        throw std::invalid_argument("predict: feature vector length mismatch");
    double acc = model.intercept;
    for (std::size_t k = 0; k < x.size(); ++k) acc += model.coefficients[k] * x[k];
    return acc;
}

std::vector<std::pair<std::string, double>> permutation_importance(const Forest& forest,
                                                                   const Dataset& data,
                                                                   int repeats,
                                                                   std::uint64_t seed) {
    if (repeats < 1) throw std::invalid_argument("permutation_importance: repeats must be >= 1");
    validate(data);
    if (forest.trees.empty()) throw std::invalid_argument("permutation_importance: empty forest");

    const double baseline = forest_mse(forest, data.rows, data.target);
    const std::size_t n = data.n_samples();

    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::string, double>> result;
    result.reserve(data.n_features());

    std::vector<std::size_t> perm(n);
    std::vector<std::vector<double>> shuffled = data.rows;
    for (std::size_t k = 0; k < data.n_features(); ++k) {
        double delta_sum = 0.0;
        for (int r = 0; r < repeats; ++r) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            for (std::size_t i = 0; i < n; ++i) shuffled[i][k] = data.rows[perm[i]][k];
            delta_sum += forest_mse(forest, shuffled, data.target) - baseline;
        }
        for (std::size_t i = 0; i < n; ++i) shuffled[i][k] = data.rows[i][k];
        result.emplace_back(data.feature_names[k], delta_sum / repeats);
    }

    std::stable_sort(result.begin(), result.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return result;
}

void write_importance_csv(const std::vector<std::pair<std::string, double>>& importance,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write importance file '" + path + "'");
    out << "feature,importance\n";
    char buf[64];
    for (const auto& [name, value] : importance) {
        std::snprintf(buf, sizeof(buf), "%.10g", value);
        out << name << ',' << buf << '\n';
    }
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace parkgrid
