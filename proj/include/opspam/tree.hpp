#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opspam/corpus.hpp"  // Label
#include "opspam/util.hpp"

namespace opspam {

struct TreeParams {
    int max_depth = 16;
    int min_leaf = 2;
    int n_candidate_features = 0;  // 0: all features (plain tree) / round(sqrt(d)) (forest)
};

// Internal nodes route x[feature] <= threshold to the left child; leaves carry
// the majority label and the class counts they were built from.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::unique_ptr<TreeNode> left, right;
    Label prediction = Label::non_fake;
    long n_fake = 0, n_non_fake = 0;

    bool is_leaf() const { return feature < 0; }
};

// Gini purity p^2 + q^2: 1 on a pure node, 0.5 on an even two-class split.
inline double gini_counts(long n_fake, long n_non_fake) {
    long n = n_fake + n_non_fake;
    if (n <= 0) throw Error("gini_node: empty node");
    double p = static_cast<double>(n_fake) / static_cast<double>(n);
    double q = static_cast<double>(n_non_fake) / static_cast<double>(n);
    return p * p + q * q;
}

inline double gini_node(const std::vector<Label>& labels) {
    long fake = 0;
    for (Label l : labels) fake += l == Label::fake ? 1 : 0;
    return gini_counts(fake, static_cast<long>(labels.size()) - fake);
}

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double weighted_purity = 0.0;  // (nL/n)*gini(L) + (nR/n)*gini(R)
};

using Matrix = std::vector<std::vector<double>>;

namespace detail {

// Candidate thresholds are midpoints between consecutive distinct sorted
// values. Features are scanned in ascending index order and ties keep the
// first maximum, which yields the lowest-feature/lowest-threshold rule.
inline std::optional<SplitResult> best_split_on(const Matrix& X, const std::vector<Label>& y,
                                                const std::vector<size_t>& idx,
                                                const std::vector<int>& candidates,
                                                int min_child) {
    size_t n = idx.size();
    if (n < 2) return std::nullopt;
    long total_fake = 0;
    for (size_t i : idx) total_fake += y[i] == Label::fake ? 1 : 0;
    long total_non = static_cast<long>(n) - total_fake;
    if (total_fake == 0 || total_non == 0) return std::nullopt;

    std::optional<SplitResult> best;
    std::vector<std::pair<double, Label>> vals(n);
    for (int f : candidates) {
        for (size_t k = 0; k < n; ++k) vals[k] = {X[idx[k]][static_cast<size_t>(f)], y[idx[k]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        long left_fake = 0, left_non = 0;
        for (size_t k = 0; k + 1 < n; ++k) {
            (vals[k].second == Label::fake ? left_fake : left_non)++;
            if (vals[k].first == vals[k + 1].first) continue;  // not a boundary
            long nL = static_cast<long>(k) + 1, nR = static_cast<long>(n) - nL;
            if (nL < min_child || nR < min_child) continue;
            double wp = (static_cast<double>(nL) / n) * gini_counts(left_fake, left_non) +
                        (static_cast<double>(nR) / n) *
                            gini_counts(total_fake - left_fake, total_non - left_non);
            if (!best || wp > best->weighted_purity) {
                best = SplitResult{f, (vals[k].first + vals[k + 1].first) / 2.0, wp};
            }
        }
    }
    return best;
}

}  // namespace detail

inline std::optional<SplitResult> best_split(const Matrix& X, const std::vector<Label>& y,
                                             const std::vector<int>& candidate_features,
                                             int min_child = 1) {
    std::vector<size_t> idx(X.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<int> cand = candidate_features;
    std::sort(cand.begin(), cand.end());
    return detail::best_split_on(X, y, idx, cand, min_child);
}

// Draws the candidate feature indices for one node; empty return means "all".
using FeatureSampler = std::function<std::vector<int>()>;

namespace detail {

struct TreeBuilder {
    const Matrix& X;
    const std::vector<Label>& y;
    TreeParams params;
    FeatureSampler sampler;
    std::vector<double>* importance;  // per-feature gain accumulator, may be null
    double n_root;

    std::unique_ptr<TreeNode> leaf(long fake, long non) const {
        auto node = std::make_unique<TreeNode>();
        node->n_fake = fake;
        node->n_non_fake = non;
        node->prediction = fake > non ? Label::fake : Label::non_fake;  // tie -> non_fake
        return node;
    }

    std::unique_ptr<TreeNode> build(std::vector<size_t>& idx, int depth) {
        long fake = 0;
        for (size_t i : idx) fake += y[i] == Label::fake ? 1 : 0;
        long non = static_cast<long>(idx.size()) - fake;

        bool stop = depth >= params.max_depth || fake == 0 || non == 0 ||
                    static_cast<long>(idx.size()) < 2L * params.min_leaf;
        std::optional<SplitResult> split;
        if (!stop) {
            std::vector<int> cand;
            if (sampler) {
                cand = sampler();
                std::sort(cand.begin(), cand.end());
            } else {
                cand.resize(X.empty() ? 0 : X[0].size());
                for (size_t f = 0; f < cand.size(); ++f) cand[f] = static_cast<int>(f);
            }
            split = best_split_on(X, y, idx, cand, params.min_leaf);
        }
        if (!split) return leaf(fake, non);

        if (importance) {
            double gain = split->weighted_purity - gini_counts(fake, non);
            (*importance)[static_cast<size_t>(split->feature)] +=
                (static_cast<double>(idx.size()) / n_root) * std::max(0.0, gain);
        }

        std::vector<size_t> left_ix, right_ix;
        for (size_t i : idx)
            (X[i][static_cast<size_t>(split->feature)] <= split->threshold ? left_ix : right_ix)
                .push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        auto node = std::make_unique<TreeNode>();
        node->feature = split->feature;
        node->threshold = split->threshold;
        node->n_fake = fake;
        node->n_non_fake = non;
        node->prediction = fake > non ? Label::fake : Label::non_fake;
        node->left = build(left_ix, depth + 1);
        node->right = build(right_ix, depth + 1);
        return node;
    }
};

}  // namespace detail

inline std::unique_ptr<TreeNode> train_tree_on(const Matrix& X, const std::vector<Label>& y,
                                               std::vector<size_t> idx, const TreeParams& params,
                                               FeatureSampler sampler = {},
                                               std::vector<double>* importance = nullptr) {
    if (idx.empty()) throw Error("train_tree: empty training data");
    detail::TreeBuilder b{X, y, params, std::move(sampler), importance,
                          static_cast<double>(idx.size())};
    return b.build(idx, 0);
}

inline std::unique_ptr<TreeNode> train_tree(const Matrix& X, const std::vector<Label>& y,
                                            const TreeParams& params = {},
                                            FeatureSampler sampler = {},
                                            std::vector<double>* importance = nullptr) {
    if (X.size() != y.size()) throw Error("train_tree: row/label count mismatch");
    std::vector<size_t> idx(X.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    return train_tree_on(X, y, std::move(idx), params, std::move(sampler), importance);
}

inline Label predict_tree(const TreeNode* node, const std::vector<double>& row) {
    while (!node->is_leaf())
        node = row[static_cast<size_t>(node->feature)] <= node->threshold ? node->left.get()
                                                                          : node->right.get();
    return node->prediction;
}

struct TreeModel {
    std::unique_ptr<TreeNode> root;
    std::vector<std::string> columns;
    TreeParams params;
};

inline TreeModel train_tree_model(const Matrix& X, const std::vector<Label>& y,
                                  std::vector<std::string> columns, const TreeParams& params = {}) {
    TreeModel m;
    m.root = train_tree(X, y, params);
    m.columns = std::move(columns);
    m.params = params;
    return m;
}

inline Label predict_row(const TreeModel& m, const std::vector<double>& row) {
    if (row.size() != m.columns.size()) throw Error("predict: column count mismatch");
    return predict_tree(m.root.get(), row);
}

}  // namespace opspam
