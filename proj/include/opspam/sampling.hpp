#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "opspam/features.hpp"

namespace opspam {

enum class SamplingStrategy { none, under, over };

inline std::string_view sampling_name(SamplingStrategy s) {
    switch (s) {
        case SamplingStrategy::none: return "none";
        case SamplingStrategy::under: return "under";
        case SamplingStrategy::over: return "over";
    }
    return "?";
}

inline std::optional<SamplingStrategy> parse_sampling(std::string_view s) {
    std::string u = lower_ascii(trim(s));
    if (u == "none") return SamplingStrategy::none;
    if (u == "under") return SamplingStrategy::under;
    if (u == "over") return SamplingStrategy::over;
    return std::nullopt;
}

struct SamplingPlan {
    SamplingStrategy strategy = SamplingStrategy::none;
    std::uint64_t seed = 0;
};

namespace detail {

inline FeatureMatrix take_rows(const FeatureMatrix& m, const std::vector<size_t>& rows) {
    FeatureMatrix out;
    out.columns = m.columns;
    out.n_dense = m.n_dense;
    out.feature_set = m.feature_set;
    out.scheme = m.scheme;
    out.rows.reserve(rows.size());
    for (size_t i : rows) {
        out.rows.push_back(m.rows[i]);
        out.labels.push_back(m.labels[i]);
        out.review_ids.push_back(m.review_ids[i]);
    }
    return out;
}

inline std::pair<std::vector<size_t>, std::vector<size_t>> split_by_class(const FeatureMatrix& m,
                                                                          const char* op) {
    std::vector<size_t> fake, non;
    for (size_t i = 0; i < m.labels.size(); ++i)
        (m.labels[i] == Label::fake ? fake : non).push_back(i);
    if (fake.empty() || non.empty())
        throw Error(std::string(op) + ": input must contain both classes");
    return {fake, non};
}

}  // namespace detail

// Shrinks the majority class by seeded uniform removal down to the minority
// count. Surviving rows keep their original relative order.
inline FeatureMatrix undersample(const FeatureMatrix& m, const SamplingPlan& plan) {
    auto [fake, non] = detail::split_by_class(m, "undersample");
    std::vector<size_t>& majority = fake.size() >= non.size() ? fake : non;
    const std::vector<size_t>& minority = fake.size() >= non.size() ? non : fake;

    std::mt19937_64 rng(plan.seed);
    std::shuffle(majority.begin(), majority.end(), rng);
    majority.resize(minority.size());

    std::vector<size_t> keep = majority;
    keep.insert(keep.end(), minority.begin(), minority.end());
    std::sort(keep.begin(), keep.end());
    return detail::take_rows(m, keep);
}

// Replicates minority rows (seeded, with replacement) until the classes are
// even. All original rows are preserved; duplicates are appended.
inline FeatureMatrix oversample(const FeatureMatrix& m, const SamplingPlan& plan) {
    auto [fake, non] = detail::split_by_class(m, "oversample");
    const std::vector<size_t>& majority = fake.size() >= non.size() ? fake : non;
    const std::vector<size_t>& minority = fake.size() >= non.size() ? non : fake;

    std::vector<size_t> keep(m.rows.size());
    for (size_t i = 0; i < keep.size(); ++i) keep[i] = i;
    std::mt19937_64 rng(plan.seed);
    for (size_t need = majority.size() - minority.size(); need > 0; --need)
        keep.push_back(minority[std::uniform_int_distribution<size_t>(0, minority.size() - 1)(rng)]);
    return detail::take_rows(m, keep);
}

inline FeatureMatrix apply_sampling(const FeatureMatrix& m, const SamplingPlan& plan) {
    switch (plan.strategy) {
        case SamplingStrategy::none: return m;
        case SamplingStrategy::under: return undersample(m, plan);
        case SamplingStrategy::over: return oversample(m, plan);
    }
    return m;
}

}  // namespace opspam
