#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "opspam/corpus.hpp"
#include "opspam/textsim.hpp"

namespace opspam {

// ---------------------------------------------------------------------------
// Behavioral features over one reviewer's posting history.
// ---------------------------------------------------------------------------

// That reviewer's reviews, sorted ascending by date (review_id breaks ties so
// the order is total and reproducible).
struct ReviewerHistory {
    const Reviewer* reviewer = nullptr;
    std::vector<const Review*> reviews;

    static ReviewerHistory of(const ReviewCorpus& corpus, const Reviewer& reviewer) {
        ReviewerHistory h;
        h.reviewer = &reviewer;
        for (size_t ix : corpus.reviews_by_reviewer(reviewer.reviewer_id))
            h.reviews.push_back(&corpus.reviews()[ix]);
        std::sort(h.reviews.begin(), h.reviews.end(), [](const Review* a, const Review* b) {
            if (a->date != b->date) return a->date < b->date;
            return a->review_id < b->review_id;
        });
        return h;
    }
};

namespace detail {
inline void require_history(const ReviewerHistory& h, const char* op) {
    if (h.reviews.empty()) throw Error(std::string(op) + ": empty reviewer history");
}
}  // namespace detail

// Days the account has existed as of ref_date.
inline long membership_length(const Reviewer& r, Date ref_date) {
    if (ref_date < r.join_date) throw Error("membership_length: join date after reference date");
    return days_between(r.join_date, ref_date);
}

// Reviews per active day: total reviews over distinct posting dates.
inline double average_posting_rate(const ReviewerHistory& h) {
    detail::require_history(h, "average_posting_rate");
    std::set<int> days;
    for (const Review* r : h.reviews) days.insert(r->date.serial);
    return static_cast<double>(h.reviews.size()) / static_cast<double>(days.size());
}

inline double positive_ratio(const ReviewerHistory& h) {
    detail::require_history(h, "positive_ratio");
    long pos = 0;
    for (const Review* r : h.reviews) pos += r->rating >= 4 ? 1 : 0;
    return static_cast<double>(pos) / static_cast<double>(h.reviews.size());
}

// Positive (>=4) over negative (<=2) review counts; a zero denominator is
// treated as 1, so the value stays finite and equals the positive count.
inline double positive_to_negative_ratio(const ReviewerHistory& h) {
    detail::require_history(h, "positive_to_negative_ratio");
    long pos = 0, neg = 0;
    for (const Review* r : h.reviews) {
        if (r->rating >= 4) ++pos;
        if (r->rating <= 2) ++neg;
    }
    return static_cast<double>(pos) / static_cast<double>(neg == 0 ? 1 : neg);
}

// Most reviews this reviewer ever posted on a single calendar date.
inline long max_posting_rate(const ReviewerHistory& h) {
    detail::require_history(h, "max_posting_rate");
    std::map<int, long> per_day;
    for (const Review* r : h.reviews) ++per_day[r->date.serial];
    long best = 0;
    for (const auto& [day, n] : per_day) best = std::max(best, n);
    return best;
}

// Days between first and last review; 0 for a single review.
inline long review_duration(const ReviewerHistory& h) {
    detail::require_history(h, "review_duration");
    int lo = h.reviews.front()->date.serial, hi = lo;
    for (const Review* r : h.reviews) {
        lo = std::min(lo, r->date.serial);
        hi = std::max(hi, r->date.serial);
    }
    return hi - lo;
}

// Per-business rating statistics. The mean includes every rating on the
// business, the probe review's own rating among them.
struct BusinessRatingStats {
    std::vector<int> ratings;
    double sum = 0.0;

    long count() const { return static_cast<long>(ratings.size()); }
    double mean() const { return sum / static_cast<double>(ratings.size()); }
};

using ProductRatingIndex = std::map<std::string, BusinessRatingStats>;

inline ProductRatingIndex index_business_ratings(const ReviewCorpus& corpus) {
    ProductRatingIndex ix;
    for (const Review& r : corpus.reviews()) {
        BusinessRatingStats& st = ix[r.business_id];
        st.ratings.push_back(r.rating);
        st.sum += r.rating;
    }
    return ix;
}

// |rating − business mean rating|.
inline double reviewer_deviation(const Review& r, const ProductRatingIndex& ix) {
    auto it = ix.find(r.business_id);
    if (it == ix.end() || it->second.ratings.empty())
        throw Error("reviewer_deviation: business '" + r.business_id + "' missing from index");
    return std::abs(static_cast<double>(r.rating) - it->second.mean());
}

inline long content_length(const Review& r) {
    return static_cast<long>(tokenize(r.content).size());
}

// 0/1 presence of each vocab term in the token sequence.
inline std::vector<double> unigram_block(const TokenSequence& tokens,
                                         const std::vector<std::string>& vocab) {
    std::set<std::string_view> present;
    for (const Token& t : tokens) present.insert(t.norm);
    std::vector<double> out(vocab.size(), 0.0);
    for (size_t i = 0; i < vocab.size(); ++i)
        if (present.count(vocab[i])) out[i] = 1.0;
    return out;
}

// Top-V terms by document frequency; ties resolved alphabetically.
inline std::vector<std::string> build_vocab(const std::vector<TokenSequence>& docs, size_t max_terms) {
    std::map<std::string, long> df;
    for (const TokenSequence& doc : docs) {
        std::set<std::string_view> seen;
        for (const Token& t : doc) seen.insert(t.norm);
        for (std::string_view term : seen) ++df[std::string(term)];
    }
    std::vector<std::pair<std::string, long>> ranked(df.begin(), df.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > max_terms) ranked.resize(max_terms);
    std::vector<std::string> vocab;
    vocab.reserve(ranked.size());
    for (auto& [term, n] : ranked) vocab.push_back(std::move(term));
    return vocab;
}

// ---------------------------------------------------------------------------
// Feature sets.
// ---------------------------------------------------------------------------

enum class FeatureId {
    useful_count,
    cool_count,
    funny_count,
    friend_count,
    review_count,
    average_posting_rate,
    positive_ratio,
    reviewer_content_similarity,
    membership_length,
    review_duration,
    positive_to_negative_ratio,
    reviewer_deviation,
    tips_count,
    capital_diversity,
    content_length,
    max_posting_rate,
};

inline std::string_view feature_name(FeatureId f) {
    switch (f) {
        case FeatureId::useful_count: return "useful_count";
        case FeatureId::cool_count: return "cool_count";
        case FeatureId::funny_count: return "funny_count";
        case FeatureId::friend_count: return "friend_count";
        case FeatureId::review_count: return "review_count";
        case FeatureId::average_posting_rate: return "average_posting_rate";
        case FeatureId::positive_ratio: return "positive_ratio";
        case FeatureId::reviewer_content_similarity: return "reviewer_content_similarity";
        case FeatureId::membership_length: return "membership_length";
        case FeatureId::review_duration: return "review_duration";
        case FeatureId::positive_to_negative_ratio: return "positive_to_negative_ratio";
        case FeatureId::reviewer_deviation: return "reviewer_deviation";
        case FeatureId::tips_count: return "tips_count";
        case FeatureId::capital_diversity: return "capital_diversity";
        case FeatureId::content_length: return "content_length";
        case FeatureId::max_posting_rate: return "max_posting_rate";
    }
    return "?";
}

inline std::optional<FeatureId> parse_feature_id(std::string_view s) {
    static const std::map<std::string_view, FeatureId> m = {
        {"useful_count", FeatureId::useful_count},
        {"cool_count", FeatureId::cool_count},
        {"funny_count", FeatureId::funny_count},
        {"friend_count", FeatureId::friend_count},
        {"review_count", FeatureId::review_count},
        {"average_posting_rate", FeatureId::average_posting_rate},
        {"positive_ratio", FeatureId::positive_ratio},
        {"reviewer_content_similarity", FeatureId::reviewer_content_similarity},
        {"membership_length", FeatureId::membership_length},
        {"review_duration", FeatureId::review_duration},
        {"positive_to_negative_ratio", FeatureId::positive_to_negative_ratio},
        {"reviewer_deviation", FeatureId::reviewer_deviation},
        {"tips_count", FeatureId::tips_count},
        {"capital_diversity", FeatureId::capital_diversity},
        {"content_length", FeatureId::content_length},
        {"max_posting_rate", FeatureId::max_posting_rate},
    };
    auto it = m.find(lower_ascii(trim(s)));
    return it == m.end() ? std::nullopt : std::optional<FeatureId>(it->second);
}

// Named sets FS1-FS5 (column order is part of the contract) or a custom list.
// FS1-FS3 expect restaurant corpora, FS4/FS5 hotel ones; custom sets run on
// anything.
struct FeatureSetSpec {
    std::string name = "FS2";
    std::vector<FeatureId> columns;
    bool include_unigrams = false;
    size_t unigram_vocab = 2000;
    std::optional<BusinessKind> required_kind;

    static FeatureSetSpec named(std::string_view name, size_t unigram_vocab = 2000) {
        auto opt = try_named(name, unigram_vocab);
        if (!opt) throw ValidationError("unknown feature set '" + std::string(name) +
                                        "' (expected FS1..FS5)");
        return *opt;
    }

    static std::optional<FeatureSetSpec> try_named(std::string_view name,
                                                   size_t unigram_vocab = 2000) {
        using F = FeatureId;
        std::string u;
        for (char c : trim(name)) u.push_back(c >= 'a' && c <= 'z' ? char(c - 'a' + 'A') : c);
        FeatureSetSpec s;
        s.name = u;
        s.unigram_vocab = unigram_vocab;
        if (u == "FS1" || u == "FS2") {
            s.columns = {F::useful_count,     F::cool_count,
                         F::funny_count,      F::friend_count,
                         F::review_count,     F::average_posting_rate,
                         F::positive_ratio,   F::reviewer_content_similarity,
                         F::membership_length,F::review_duration,
                         F::positive_to_negative_ratio};
            if (u == "FS2") s.columns.push_back(F::reviewer_deviation);
            s.required_kind = BusinessKind::restaurant;
            return s;
        }
        if (u == "FS3") {
            s.columns = {F::content_length, F::positive_ratio, F::reviewer_content_similarity,
                         F::reviewer_deviation, F::max_posting_rate};
            s.include_unigrams = true;
            s.required_kind = BusinessKind::restaurant;
            return s;
        }
        if (u == "FS4" || u == "FS5") {
            s.columns = {F::useful_count,     F::cool_count,
                         F::funny_count,      F::friend_count,
                         F::review_count,     F::average_posting_rate,
                         F::tips_count,       F::reviewer_content_similarity,
                         F::membership_length,F::review_duration,
                         F::capital_diversity};
            if (u == "FS5") s.columns.push_back(F::reviewer_deviation);
            s.required_kind = BusinessKind::hotel;
            return s;
        }
        return std::nullopt;
    }

    static FeatureSetSpec custom(std::string name, std::vector<FeatureId> columns,
                                 bool unigrams = false, size_t unigram_vocab = 2000) {
        FeatureSetSpec s;
        s.name = std::move(name);
        s.columns = std::move(columns);
        s.include_unigrams = unigrams;
        s.unigram_vocab = unigram_vocab;
        return s;
    }

    bool admissible_for(BusinessKind kind) const {
        return !required_kind || *required_kind == kind;
    }
};

// ---------------------------------------------------------------------------
// Matrix assembly.
// ---------------------------------------------------------------------------

struct FeatureMatrix {
    std::vector<std::string> columns;  // dense names, then "unigram:<term>"
    size_t n_dense = 0;
    std::vector<std::vector<double>> rows;
    std::vector<Label> labels;
    std::vector<std::string> review_ids;
    std::string feature_set;  // report metadata
    std::string scheme;

    size_t width() const { return columns.size(); }

    std::pair<long, long> class_counts() const {
        long fake = 0, non = 0;
        for (Label l : labels) (l == Label::fake ? fake : non)++;
        return {fake, non};
    }
};

enum class VoteSource { reviewer_profile, review };

struct FeatureBuildOptions {
    std::optional<Date> ref_date;  // default: max review date + 1 day
    VoteSource vote_source = VoteSource::reviewer_profile;
    TextOptions text{};
    LabelPolicy policy{};
};

inline FeatureMatrix build_feature_matrix(const ReviewCorpus& corpus, const FeatureSetSpec& spec,
                                          WeightingScheme scheme = {},
                                          const FeatureBuildOptions& opt = {}) {
    if (spec.required_kind) {
        auto kind = corpus.uniform_kind();
        if (!kind || *kind != *spec.required_kind)
            throw ValidationError("feature set " + spec.name + " requires a " +
                                  std::string(business_kind_name(*spec.required_kind)) +
                                  " corpus");
    }

    Date ref_date{};
    if (opt.ref_date) {
        ref_date = *opt.ref_date;
    } else {
        auto maxd = corpus.max_review_date();
        ref_date = maxd ? maxd->plus_days(1) : Date{0};
    }

    ProductRatingIndex ratings = index_business_ratings(corpus);

    // Preprocess each review's text once; the spelling of a reviewer's other
    // reviews feeds RCS, the review's own tokens feed the text features.
    std::vector<TokenSequence> tokens(corpus.reviews().size());
    bool needs_tokens = spec.include_unigrams;
    for (FeatureId f : spec.columns)
        if (f == FeatureId::reviewer_content_similarity || f == FeatureId::capital_diversity)
            needs_tokens = true;
    if (needs_tokens)
        for (size_t i = 0; i < corpus.reviews().size(); ++i)
            tokens[i] = preprocess(corpus.reviews()[i].content, opt.text);

    // Per-reviewer values, computed once and shared by that reviewer's rows.
    struct ReviewerValues {
        double rcs = 0, apr = 0, pos = 0, p2n = 0;
        long member = 0, duration = 0, mpr = 0;
    };
    std::map<std::string, ReviewerValues> per_reviewer;
    bool wants_rcs = false;
    for (FeatureId f : spec.columns) wants_rcs |= f == FeatureId::reviewer_content_similarity;
    for (const Reviewer& rv : corpus.reviewers()) {
        if (corpus.reviews_by_reviewer(rv.reviewer_id).empty()) continue;
        ReviewerHistory h = ReviewerHistory::of(corpus, rv);
        ReviewerValues v;
        v.apr = average_posting_rate(h);
        v.pos = positive_ratio(h);
        v.p2n = positive_to_negative_ratio(h);
        v.member = membership_length(rv, ref_date);
        v.duration = review_duration(h);
        v.mpr = max_posting_rate(h);
        if (wants_rcs) {
            std::vector<TokenSequence> own;
            for (size_t ix : corpus.reviews_by_reviewer(rv.reviewer_id)) own.push_back(tokens[ix]);
            v.rcs = reviewer_content_similarity(own, scheme);
        }
        per_reviewer[rv.reviewer_id] = v;
    }

    std::vector<std::string> vocab;
    if (spec.include_unigrams && spec.unigram_vocab > 0) vocab = build_vocab(tokens, spec.unigram_vocab);

    FeatureMatrix m;
    m.feature_set = spec.name;
    m.scheme = std::string(weighting_name(scheme.variant));
    for (FeatureId f : spec.columns) m.columns.emplace_back(feature_name(f));
    m.n_dense = m.columns.size();
    for (const std::string& term : vocab) m.columns.push_back("unigram:" + term);

    m.rows.reserve(corpus.reviews().size());
    for (size_t i = 0; i < corpus.reviews().size(); ++i) {
        const Review& r = corpus.reviews()[i];
        const Reviewer& rv = corpus.reviewer_of(r);
        const ReviewerValues& v = per_reviewer.at(rv.reviewer_id);
        std::vector<double> row;
        row.reserve(m.columns.size());
        for (FeatureId f : spec.columns) {
            switch (f) {
                case FeatureId::useful_count:
                    row.push_back(static_cast<double>(
                        opt.vote_source == VoteSource::reviewer_profile ? rv.useful_count
                                                                        : r.useful_count));
                    break;
                case FeatureId::cool_count:
                    row.push_back(static_cast<double>(
                        opt.vote_source == VoteSource::reviewer_profile ? rv.cool_count
                                                                        : r.cool_count));
                    break;
                case FeatureId::funny_count:
                    row.push_back(static_cast<double>(
                        opt.vote_source == VoteSource::reviewer_profile ? rv.funny_count
                                                                        : r.funny_count));
                    break;
                case FeatureId::friend_count: row.push_back(static_cast<double>(rv.friend_count)); break;
                case FeatureId::review_count: row.push_back(static_cast<double>(rv.review_count)); break;
                case FeatureId::average_posting_rate: row.push_back(v.apr); break;
                case FeatureId::positive_ratio: row.push_back(v.pos); break;
                case FeatureId::reviewer_content_similarity: row.push_back(v.rcs); break;
                case FeatureId::membership_length: row.push_back(static_cast<double>(v.member)); break;
                case FeatureId::review_duration: row.push_back(static_cast<double>(v.duration)); break;
                case FeatureId::positive_to_negative_ratio: row.push_back(v.p2n); break;
                case FeatureId::reviewer_deviation: row.push_back(reviewer_deviation(r, ratings)); break;
                case FeatureId::tips_count: row.push_back(static_cast<double>(rv.tip_count)); break;
                case FeatureId::capital_diversity: row.push_back(capital_diversity(tokens[i])); break;
                case FeatureId::content_length:
                    row.push_back(static_cast<double>(content_length(r)));
                    break;
                case FeatureId::max_posting_rate: row.push_back(static_cast<double>(v.mpr)); break;
            }
        }
        if (!vocab.empty()) {
            std::vector<double> uni = unigram_block(tokens[i], vocab);
            row.insert(row.end(), uni.begin(), uni.end());
        }
        m.rows.push_back(std::move(row));
        m.labels.push_back(map_label(r.flag, opt.policy));
        m.review_ids.push_back(r.review_id);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Min-max normalization over the dense columns (the unigram block is already
// 0/1). Fitted on training rows; application clamps, so test rows outside the
// fitted range still land in [0,1]. Constant columns map to 0.
// ---------------------------------------------------------------------------

struct Normalizer {
    std::vector<double> lo, hi;   // per dense column
    std::vector<char> constant;
    size_t n_dense = 0;

    double transform(size_t col, double v) const {
        if (constant[col]) return 0.0;
        return std::clamp((v - lo[col]) / (hi[col] - lo[col]), 0.0, 1.0);
    }
};

inline Normalizer fit_normalizer(const FeatureMatrix& m,
                                 const std::vector<size_t>* row_subset = nullptr) {
    size_t n = row_subset ? row_subset->size() : m.rows.size();
    if (n == 0) throw Error("fit_normalizer: empty training set");
    Normalizer z;
    z.n_dense = m.n_dense;
    z.lo.assign(m.n_dense, 0.0);
    z.hi.assign(m.n_dense, 0.0);
    z.constant.assign(m.n_dense, 0);
    for (size_t c = 0; c < m.n_dense; ++c) {
        double lo = 0, hi = 0;
        for (size_t k = 0; k < n; ++k) {
            double v = m.rows[row_subset ? (*row_subset)[k] : k][c];
            if (k == 0) lo = hi = v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        z.lo[c] = lo;
        z.hi[c] = hi;
        z.constant[c] = lo == hi ? 1 : 0;
    }
    return z;
}

inline void apply_normalizer(FeatureMatrix& m, const Normalizer& z) {
    if (z.n_dense != m.n_dense) throw Error("apply_normalizer: column count mismatch");
    for (auto& row : m.rows)
        for (size_t c = 0; c < m.n_dense; ++c) row[c] = z.transform(c, row[c]);
}

// CSV export: review_id first, then every feature column, then the label.
inline void write_feature_csv(const FeatureMatrix& m, std::ostream& out) {
    out << "review_id";
    for (const std::string& c : m.columns) out << ',' << c;
    out << ",label\r\n";
    for (size_t i = 0; i < m.rows.size(); ++i) {
        out << m.review_ids[i];
        for (double v : m.rows[i]) out << ',' << format_fixed(v, 6);
        out << ',' << label_name(m.labels[i]) << "\r\n";
    }
}

inline void write_feature_csv(const FeatureMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    write_feature_csv(m, out);
}

}  // namespace opspam
