#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "opspam/corpus.hpp"  // Label
#include "opspam/tree.hpp"    // Matrix
#include "opspam/util.hpp"

namespace opspam {

struct SvmParams {
    double C = 1.0;
    int epochs = 200;
    std::uint64_t seed = 0;
    // learning rate follows 1/(lambda*t) with lambda = 1/(C*n)
};

struct LinearSvmModel {
    std::vector<double> w;
    double b = 0.0;
    std::vector<std::string> columns;
    SvmParams params;
    double objective = 0.0;               // value at (w, b)
    std::vector<double> objective_trace;  // best-so-far at each epoch checkpoint
};

// (1/2)||w||^2 + C * sum hinge(1 - y_i (w.x_i - b))
inline double svm_objective(const Matrix& X, const std::vector<int>& y,
                            const std::vector<double>& w, double b, double C) {
    double reg = 0.0;
    for (double v : w) reg += v * v;
    double hinge = 0.0;
    for (size_t i = 0; i < X.size(); ++i) {
        double dot = 0.0;
        for (size_t j = 0; j < w.size(); ++j) dot += w[j] * X[i][j];
        hinge += std::max(0.0, 1.0 - y[i] * (dot - b));
    }
    return 0.5 * reg + C * hinge;
}

namespace detail {

// Exact minimizer of the hinge sum in b for fixed w. The sum is piecewise
// linear and convex in b with one breakpoint per row at w.x_i - y_i; the slope
// crosses zero after the first n_neg sorted breakpoints, so the midpoint of
// that interval minimizes (and centers the boundary on symmetric data).
inline double polish_bias(const Matrix& X, const std::vector<int>& y,
                          const std::vector<double>& w) {
    size_t n = X.size();
    std::vector<double> events(n);
    size_t n_neg = 0;
    for (size_t i = 0; i < n; ++i) {
        double dot = 0.0;
        for (size_t j = 0; j < w.size(); ++j) dot += w[j] * X[i][j];
        events[i] = dot - static_cast<double>(y[i]);
        if (y[i] < 0) ++n_neg;
    }
    std::sort(events.begin(), events.end());
    return (events[n_neg - 1] + events[n_neg]) / 2.0;
}

}  // namespace detail

// Primal stochastic subgradient descent on the hinge objective (step 1/(λt),
// λ = 1/(C·n), bias unregularized), keeping the best (w, b) seen at epoch
// checkpoints, then an exact 1-D bias polish that can only lower the
// objective. Labels encode fake -> +1, non_fake -> -1.
inline LinearSvmModel train_svm(const Matrix& X, const std::vector<Label>& labels,
                                std::vector<std::string> columns, const SvmParams& params = {}) {
    if (X.empty()) throw Error("train_svm: empty training data");
    if (X.size() != labels.size()) throw Error("train_svm: row/label count mismatch");
    if (!(params.C > 0)) throw Error("train_svm: C must be positive");
    if (params.epochs < 1) throw Error("train_svm: epochs must be positive");
    const size_t n = X.size(), d = X[0].size();
    if (!columns.empty() && columns.size() != d)
        throw Error("train_svm: column names don't match row width");

    std::vector<int> y(n);
    long pos = 0;
    for (size_t i = 0; i < n; ++i) {
        y[i] = labels[i] == Label::fake ? 1 : -1;
        pos += y[i] > 0 ? 1 : 0;
    }
    if (pos == 0 || pos == static_cast<long>(n))
        throw Error("train_svm: single-class input");

    const double lambda = 1.0 / (params.C * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    std::vector<double> w(d, 0.0);
    double b = 0.0;

    std::vector<double> best_w = w;
    double best_b = b;
    double best_obj = svm_objective(X, y, w, b, params.C);
    std::vector<double> trace;
    trace.reserve(static_cast<size_t>(params.epochs) + 1);

    std::mt19937_64 rng(params.seed);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;

    double t = 1.0;
    for (int epoch = 0; epoch < params.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (size_t k = 0; k < n; ++k, t += 1.0) {
            size_t i = order[k];
            double eta = 1.0 / (lambda * t);
            double dot = 0.0;
            for (size_t j = 0; j < d; ++j) dot += w[j] * X[i][j];
            bool active = y[i] * (dot - b) < 1.0;

            double scale = 1.0 - eta * lambda;  // = 1 - 1/t
            for (size_t j = 0; j < d; ++j) w[j] *= scale;
            if (active) {
                double step = eta * y[i];
                for (size_t j = 0; j < d; ++j) w[j] += step * X[i][j];
                b -= step;
            }
            double norm2 = 0.0;
            for (double v : w) norm2 += v * v;
            if (norm2 > radius * radius) {
                double shrink = radius / std::sqrt(norm2);
                for (double& v : w) v *= shrink;
            }
        }
        double obj = svm_objective(X, y, w, b, params.C);
        if (obj < best_obj) {
            best_obj = obj;
            best_w = w;
            best_b = b;
        }
        trace.push_back(best_obj);
    }

    double polished = detail::polish_bias(X, y, best_w);
    double polished_obj = svm_objective(X, y, best_w, polished, params.C);
    if (polished_obj <= best_obj) {
        best_b = polished;
        best_obj = polished_obj;
    }
    trace.push_back(best_obj);

    LinearSvmModel m;
    m.w = std::move(best_w);
    m.b = best_b;
    m.columns = std::move(columns);
    m.params = params;
    m.objective = best_obj;
    m.objective_trace = std::move(trace);
    return m;
}

// sign(w.x - b): positive -> fake, zero or negative -> non_fake.
inline Label predict_row(const LinearSvmModel& m, const std::vector<double>& row) {
    if (row.size() != m.w.size()) throw Error("predict: column count mismatch");
    double dot = 0.0;
    for (size_t j = 0; j < m.w.size(); ++j) dot += m.w[j] * row[j];
    return dot - m.b > 0.0 ? Label::fake : Label::non_fake;
}

inline double decision_value(const LinearSvmModel& m, const std::vector<double>& row) {
    double dot = 0.0;
    for (size_t j = 0; j < m.w.size(); ++j) dot += m.w[j] * row[j];
    return dot - m.b;
}

}  // namespace opspam
