#pragma once

#include <cmath>
#include <random>

#include "opspam/tree.hpp"

namespace opspam {

struct ForestParams {
    int n_trees = 100;
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

struct ForestModel {
    std::vector<std::unique_ptr<TreeNode>> trees;
    std::vector<double> importance_raw;  // accumulated node-weighted purity gains
    std::vector<std::string> columns;
    TreeParams tree_params;
    ForestParams params;
};

// Bagged Gini trees. Each tree gets its own pre-drawn seed from the master
// seed (trees are independent streams, so training order can't change the
// result), a same-size bootstrap resample, and per-node feature subsets of
// round(sqrt(d)) candidates unless n_candidate_features overrides it.
inline ForestModel train_forest(const Matrix& X, const std::vector<Label>& y,
                                std::vector<std::string> columns, const TreeParams& tree_params = {},
                                const ForestParams& params = {}) {
    if (X.empty()) throw Error("train_forest: empty training data");
    if (X.size() != y.size()) throw Error("train_forest: row/label count mismatch");
    if (params.n_trees < 1) throw Error("train_forest: n_trees must be positive");
    const size_t n = X.size(), d = X[0].size();
    if (!columns.empty() && columns.size() != d)
        throw Error("train_forest: column names don't match row width");

    int n_cand = tree_params.n_candidate_features;
    if (n_cand <= 0) n_cand = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
    n_cand = std::clamp(n_cand, 1, static_cast<int>(d));

    ForestModel model;
    model.columns = std::move(columns);
    model.tree_params = tree_params;
    model.params = params;
    model.importance_raw.assign(d, 0.0);

    std::mt19937_64 master(params.seed);
    std::vector<std::uint64_t> tree_seeds(static_cast<size_t>(params.n_trees));
    for (auto& s : tree_seeds) s = master();

    std::vector<int> deck(d);
    for (size_t f = 0; f < d; ++f) deck[f] = static_cast<int>(f);

    for (int t = 0; t < params.n_trees; ++t) {
        std::mt19937_64 rng(tree_seeds[static_cast<size_t>(t)]);

        std::vector<size_t> idx(n);
        if (params.bootstrap) {
            std::uniform_int_distribution<size_t> pick(0, n - 1);
            for (size_t i = 0; i < n; ++i) idx[i] = pick(rng);
        } else {
            for (size_t i = 0; i < n; ++i) idx[i] = i;
        }

        FeatureSampler sampler;
        if (static_cast<size_t>(n_cand) < d) {
            sampler = [&rng, &deck, n_cand, d]() {
                // partial Fisher-Yates draw without replacement
                for (int k = 0; k < n_cand; ++k) {
                    std::uniform_int_distribution<size_t> pick(static_cast<size_t>(k), d - 1);
                    std::swap(deck[static_cast<size_t>(k)], deck[pick(rng)]);
                }
                return std::vector<int>(deck.begin(), deck.begin() + n_cand);
            };
        }
        model.trees.push_back(train_tree_on(X, y, std::move(idx), tree_params, sampler,
                                            &model.importance_raw));
    }
    return model;
}

inline Label predict_row(const ForestModel& m, const std::vector<double>& row) {
    if (m.trees.empty()) throw Error("predict: untrained forest");
    if (row.size() != m.importance_raw.size()) throw Error("predict: column count mismatch");
    long fake = 0;
    for (const auto& tree : m.trees) fake += predict_tree(tree.get(), row) == Label::fake ? 1 : 0;
    long non = static_cast<long>(m.trees.size()) - fake;
    return fake > non ? Label::fake : Label::non_fake;  // tie -> non_fake
}

// Scores scaled to sum to 100, sorted descending; equal scores keep column
// order. A forest that never found a useful split reports all zeros.
inline std::vector<std::pair<std::string, double>> forest_importance(const ForestModel& m) {
    if (m.trees.empty()) throw Error("forest_importance: untrained model");
    double total = 0.0;
    for (double v : m.importance_raw) total += v;
    std::vector<std::pair<std::string, double>> out;
    out.reserve(m.importance_raw.size());
    for (size_t f = 0; f < m.importance_raw.size(); ++f) {
        std::string name = f < m.columns.size() ? m.columns[f] : "f" + std::to_string(f);
        out.emplace_back(name, total > 0.0 ? m.importance_raw[f] / total * 100.0 : 0.0);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

}  // namespace opspam
