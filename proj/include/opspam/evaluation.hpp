#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "opspam/forest.hpp"
#include "opspam/sampling.hpp"
#include "opspam/svm.hpp"

namespace opspam {

struct ConfusionCounts {
    long t_fake = 0;      // fake predicted fake
    long t_non_fake = 0;  // non-fake predicted non-fake
    long f_fake = 0;      // non-fake predicted fake
    long f_non_fake = 0;  // fake predicted non-fake

    long total() const { return t_fake + t_non_fake + f_fake + f_non_fake; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        t_fake += o.t_fake;
        t_non_fake += o.t_non_fake;
        f_fake += o.f_fake;
        f_non_fake += o.f_non_fake;
        return *this;
    }
};

inline ConfusionCounts confusion(const std::vector<Label>& y_true,
                                 const std::vector<Label>& y_pred) {
    if (y_true.size() != y_pred.size()) throw Error("confusion: length mismatch");
    ConfusionCounts c;
    for (size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == Label::fake)
            (y_pred[i] == Label::fake ? c.t_fake : c.f_non_fake)++;
        else
            (y_pred[i] == Label::fake ? c.f_fake : c.t_non_fake)++;
    }
    return c;
}

// All four metrics on a 0-100 scale. A degenerate denominator (no predicted
// fakes / no actual fakes) reports 0 with the corresponding flag cleared
// rather than raising.
struct MetricsReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    bool precision_defined = true;
    bool recall_defined = true;
};

inline MetricsReport metrics(const ConfusionCounts& c) {
    if (c.total() <= 0) throw Error("metrics: empty confusion");
    MetricsReport m;
    long pdenom = c.t_fake + c.f_fake;
    long rdenom = c.t_fake + c.f_non_fake;
    m.precision_defined = pdenom > 0;
    m.recall_defined = rdenom > 0;
    if (m.precision_defined) m.precision = 100.0 * c.t_fake / static_cast<double>(pdenom);
    if (m.recall_defined) m.recall = 100.0 * c.t_fake / static_cast<double>(rdenom);
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.accuracy = 100.0 * (c.t_fake + c.t_non_fake) / static_cast<double>(c.total());
    return m;
}

// Stratified k folds: shuffle each class, lay the classes out one after the
// other, and deal positions round-robin. Every class lands within one row of
// an even split across folds, and k=n degenerates to leave-one-out.
inline std::vector<std::vector<size_t>> kfold_split(const std::vector<Label>& labels, int k,
                                                    std::uint64_t seed) {
    const size_t n = labels.size();
    if (k < 1) throw Error("kfold_split: k must be >= 1");
    if (n < static_cast<size_t>(k))
        throw Error("kfold_split: fewer rows (" + std::to_string(n) + ") than folds (" +
                    std::to_string(k) + ")");
    std::vector<size_t> fake, non;
    for (size_t i = 0; i < n; ++i) (labels[i] == Label::fake ? fake : non).push_back(i);
    std::mt19937_64 rng(seed);
    std::shuffle(fake.begin(), fake.end(), rng);
    std::shuffle(non.begin(), non.end(), rng);

    std::vector<std::vector<size_t>> folds(static_cast<size_t>(k));
    size_t pos = 0;
    for (size_t i : fake) folds[pos++ % static_cast<size_t>(k)].push_back(i);
    for (size_t i : non) folds[pos++ % static_cast<size_t>(k)].push_back(i);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

// ---------------------------------------------------------------------------
// Cross-validation driver.
// ---------------------------------------------------------------------------

enum class ClassifierKind { tree, forest, svm };

inline std::string_view classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::tree: return "tree";
        case ClassifierKind::forest: return "rf";
        case ClassifierKind::svm: return "svm";
    }
    return "?";
}

inline std::optional<ClassifierKind> parse_classifier(std::string_view s) {
    std::string u = lower_ascii(trim(s));
    if (u == "tree") return ClassifierKind::tree;
    if (u == "rf" || u == "forest") return ClassifierKind::forest;
    if (u == "svm") return ClassifierKind::svm;
    return std::nullopt;
}

struct TrainParams {
    TreeParams tree;
    ForestParams forest;
    SvmParams svm;
};

struct TrainedModel {
    ClassifierKind kind = ClassifierKind::forest;
    TreeModel tree;
    ForestModel forest;
    LinearSvmModel svm;
};

inline TrainedModel train_model(ClassifierKind kind, const Matrix& X,
                                const std::vector<Label>& y, std::vector<std::string> columns,
                                const TrainParams& params) {
    TrainedModel m;
    m.kind = kind;
    switch (kind) {
        case ClassifierKind::tree:
            m.tree = train_tree_model(X, y, std::move(columns), params.tree);
            break;
        case ClassifierKind::forest:
            m.forest = train_forest(X, y, std::move(columns), params.tree, params.forest);
            break;
        case ClassifierKind::svm:
            m.svm = train_svm(X, y, std::move(columns), params.svm);
            break;
    }
    return m;
}

inline Label predict_row(const TrainedModel& m, const std::vector<double>& row) {
    switch (m.kind) {
        case ClassifierKind::tree: return predict_row(m.tree, row);
        case ClassifierKind::forest: return predict_row(m.forest, row);
        case ClassifierKind::svm: return predict_row(m.svm, row);
    }
    return Label::non_fake;
}

inline std::vector<Label> predict(const TrainedModel& m, const Matrix& X) {
    std::vector<Label> out;
    out.reserve(X.size());
    for (const auto& row : X) out.push_back(predict_row(m, row));
    return out;
}

enum class NormalizationMode { per_fold, global };

struct FoldResult {
    ConfusionCounts confusion;
    MetricsReport metrics;
};

struct CvReport {
    int k = 0;
    std::uint64_t fold_seed = 0;
    std::vector<std::vector<size_t>> fold_test_rows;
    std::vector<FoldResult> folds;
    MetricsReport averaged;           // arithmetic mean of the fold metrics
    MetricsReport pooled;             // metrics over the summed confusion
    ConfusionCounts pooled_confusion;
};

// Per fold: fit the normalizer on the training rows (unless global), apply to
// both sides, rebalance the training rows only, train, score the test rows.
inline CvReport cross_validate(const FeatureMatrix& matrix, ClassifierKind kind,
                               const TrainParams& params, const SamplingPlan& sampling, int k,
                               std::uint64_t fold_seed,
                               NormalizationMode norm = NormalizationMode::per_fold) {
    if (k < 2) throw Error("cross_validate: k must be >= 2");
    CvReport report;
    report.k = k;
    report.fold_seed = fold_seed;
    report.fold_test_rows = kfold_split(matrix.labels, k, fold_seed);

    FeatureMatrix global = matrix;
    if (norm == NormalizationMode::global) apply_normalizer(global, fit_normalizer(global));
    const FeatureMatrix& base = norm == NormalizationMode::global ? global : matrix;

    double sum_p = 0, sum_r = 0, sum_f1 = 0, sum_acc = 0;
    bool all_p = true, all_r = true;
    for (int f = 0; f < k; ++f) {
        const std::vector<size_t>& test_ix = report.fold_test_rows[static_cast<size_t>(f)];
        std::vector<char> in_test(base.rows.size(), 0);
        for (size_t i : test_ix) in_test[i] = 1;
        std::vector<size_t> train_ix;
        train_ix.reserve(base.rows.size() - test_ix.size());
        for (size_t i = 0; i < base.rows.size(); ++i)
            if (!in_test[i]) train_ix.push_back(i);

        FeatureMatrix train = detail::take_rows(base, train_ix);
        FeatureMatrix test = detail::take_rows(base, test_ix);
        if (norm == NormalizationMode::per_fold) {
            Normalizer z = fit_normalizer(train);
            apply_normalizer(train, z);
            apply_normalizer(test, z);
        }

        SamplingPlan fold_plan{sampling.strategy, mix_seed(sampling.seed, static_cast<std::uint64_t>(f))};
        if (sampling.strategy != SamplingStrategy::none) train = apply_sampling(train, fold_plan);

        TrainParams fold_params = params;
        fold_params.forest.seed = mix_seed(params.forest.seed, static_cast<std::uint64_t>(f));
        fold_params.svm.seed = mix_seed(params.svm.seed, static_cast<std::uint64_t>(f));
        TrainedModel model = train_model(kind, train.rows, train.labels, train.columns, fold_params);

        FoldResult fr;
        fr.confusion = confusion(test.labels, predict(model, test.rows));
        fr.metrics = metrics(fr.confusion);
        report.pooled_confusion += fr.confusion;
        sum_p += fr.metrics.precision;
        sum_r += fr.metrics.recall;
        sum_f1 += fr.metrics.f1;
        sum_acc += fr.metrics.accuracy;
        all_p &= fr.metrics.precision_defined;
        all_r &= fr.metrics.recall_defined;
        report.folds.push_back(std::move(fr));
    }

    report.averaged.precision = sum_p / k;
    report.averaged.recall = sum_r / k;
    report.averaged.f1 = sum_f1 / k;
    report.averaged.accuracy = sum_acc / k;
    report.averaged.precision_defined = all_p;
    report.averaged.recall_defined = all_r;
    report.pooled = metrics(report.pooled_confusion);
    return report;
}

}  // namespace opspam
