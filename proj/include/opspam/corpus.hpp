#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "opspam/date.hpp"
#include "opspam/util.hpp"

namespace opspam {

// Site moderation flags: Y/N are confirmed fake/genuine, YR/NR are the
// "recommended-for-filtering" variants that some dumps carry.
enum class Flag { y, n, yr, nr };

enum class Label { fake, non_fake };

enum class BusinessKind { restaurant, hotel };

inline std::optional<Flag> parse_flag(std::string_view s) {
    std::string u;
    for (char c : trim(s)) u.push_back(c >= 'a' && c <= 'z' ? static_cast<char>(c - 'a' + 'A') : c);
    if (u == "Y") return Flag::y;
    if (u == "N") return Flag::n;
    if (u == "YR") return Flag::yr;
    if (u == "NR") return Flag::nr;
    return std::nullopt;
}

inline std::string_view flag_name(Flag f) {
    switch (f) {
        case Flag::y: return "Y";
        case Flag::n: return "N";
        case Flag::yr: return "YR";
        case Flag::nr: return "NR";
    }
    return "?";
}

inline std::string_view label_name(Label l) { return l == Label::fake ? "fake" : "non_fake"; }

inline std::optional<BusinessKind> parse_business_kind(std::string_view s) {
    std::string u = lower_ascii(trim(s));
    if (u == "restaurant") return BusinessKind::restaurant;
    if (u == "hotel") return BusinessKind::hotel;
    return std::nullopt;
}

inline std::string_view business_kind_name(BusinessKind k) {
    return k == BusinessKind::restaurant ? "restaurant" : "hotel";
}

// How the R-variants fold into the two training classes.
struct LabelPolicy {
    Label yr = Label::fake;
    Label nr = Label::non_fake;
};

inline Label map_label(Flag f, const LabelPolicy& policy = {}) {
    switch (f) {
        case Flag::y: return Label::fake;
        case Flag::n: return Label::non_fake;
        case Flag::yr: return policy.yr;
        case Flag::nr: return policy.nr;
    }
    return Label::non_fake;
}

struct Review {
    std::string review_id;
    std::string reviewer_id;
    std::string business_id;
    Date date;
    std::string content;
    long useful_count = 0;
    long cool_count = 0;
    long funny_count = 0;
    int rating = 0;  // 1..5
    Flag flag = Flag::n;
};

struct Reviewer {
    std::string reviewer_id;
    std::string name;
    std::string location;
    Date join_date;
    long friend_count = 0;
    long review_count = 0;  // profile total, may exceed reviews present in a corpus
    long useful_count = 0;
    long cool_count = 0;
    long funny_count = 0;
    long tip_count = 0;
};

struct Business {
    std::string business_id;
    BusinessKind kind = BusinessKind::restaurant;
    std::string name;
    std::string location;
    long review_count = 0;
    double site_rating = 0.0;  // 1..5, as displayed on the site
};

// One record rejected (or complained about) during load/validation.
struct RowIssue {
    std::string file;     // "reviews", "reviewers", "businesses" or a path
    size_t line = 0;      // 1-based input line, 0 when not from a file
    std::string id;       // entity id when known
    std::string field;
    std::string message;

    std::string to_text() const {
        std::ostringstream os;
        os << file;
        if (line) os << ":" << line;
        if (!id.empty()) os << " [" << id << "]";
        if (!field.empty()) os << " field '" << field << "'";
        os << ": " << message;
        return os.str();
    }
};

struct LoadReport {
    std::vector<RowIssue> issues;
    size_t reviews_kept = 0, reviewers_kept = 0, businesses_kept = 0;

    bool ok() const { return issues.empty(); }

    std::string to_text() const {
        std::ostringstream os;
        for (const RowIssue& i : issues) os << i.to_text() << "\n";
        return os.str();
    }
};

namespace detail {

inline void check_count(long v, const char* field, const std::string& id, const std::string& file,
                        size_t line, std::vector<RowIssue>& out) {
    if (v < 0) out.push_back({file, line, id, field, "count must be non-negative"});
}

}  // namespace detail

// Field-level checks for a single record. Referential checks happen in
// ReviewCorpus::build where the other tables are visible.
inline std::vector<RowIssue> validate_review(const Review& r, size_t line = 0) {
    std::vector<RowIssue> out;
    if (r.review_id.empty()) out.push_back({"reviews", line, r.review_id, "review_id", "missing id"});
    if (r.reviewer_id.empty())
        out.push_back({"reviews", line, r.review_id, "reviewer_id", "missing reviewer id"});
    if (r.business_id.empty())
        out.push_back({"reviews", line, r.review_id, "business_id", "missing business id"});
    if (r.rating < 1 || r.rating > 5)
        out.push_back({"reviews", line, r.review_id, "rating", "rating must be an integer in 1..5"});
    detail::check_count(r.useful_count, "useful_count", r.review_id, "reviews", line, out);
    detail::check_count(r.cool_count, "cool_count", r.review_id, "reviews", line, out);
    detail::check_count(r.funny_count, "funny_count", r.review_id, "reviews", line, out);
    return out;
}

inline std::vector<RowIssue> validate_reviewer(const Reviewer& r, size_t line = 0) {
    std::vector<RowIssue> out;
    if (r.reviewer_id.empty())
        out.push_back({"reviewers", line, r.reviewer_id, "reviewer_id", "missing id"});
    detail::check_count(r.friend_count, "friend_count", r.reviewer_id, "reviewers", line, out);
    detail::check_count(r.review_count, "review_count", r.reviewer_id, "reviewers", line, out);
    detail::check_count(r.useful_count, "useful_count", r.reviewer_id, "reviewers", line, out);
    detail::check_count(r.cool_count, "cool_count", r.reviewer_id, "reviewers", line, out);
    detail::check_count(r.funny_count, "funny_count", r.reviewer_id, "reviewers", line, out);
    detail::check_count(r.tip_count, "tip_count", r.reviewer_id, "reviewers", line, out);
    return out;
}

inline std::vector<RowIssue> validate_business(const Business& b, size_t line = 0) {
    std::vector<RowIssue> out;
    if (b.business_id.empty())
        out.push_back({"businesses", line, b.business_id, "business_id", "missing id"});
    detail::check_count(b.review_count, "review_count", b.business_id, "businesses", line, out);
    if (b.site_rating < 1.0 || b.site_rating > 5.0)
        out.push_back({"businesses", line, b.business_id, "site_rating", "rating must lie in [1,5]"});
    return out;
}

// Immutable review corpus with id indexes. Construction enforces unique ids,
// referential integrity and the join-date/review-date ordering; offending rows
// are dropped and reported.
class ReviewCorpus {
public:
    ReviewCorpus() = default;

    static ReviewCorpus build(std::vector<Review> reviews, std::vector<Reviewer> reviewers,
                              std::vector<Business> businesses, LoadReport* report = nullptr) {
        LoadReport local;
        LoadReport& rep = report ? *report : local;
        ReviewCorpus c;

        // Pass 1: structural field checks + duplicate ids, keep survivors.
        std::map<std::string, size_t> reviewer_ix, business_ix;
        for (Reviewer& r : reviewers) {
            auto issues = validate_reviewer(r);
            if (!issues.empty()) {
                rep.issues.insert(rep.issues.end(), issues.begin(), issues.end());
                continue;
            }
            if (reviewer_ix.count(r.reviewer_id)) {
                rep.issues.push_back(
                    {"reviewers", 0, r.reviewer_id, "reviewer_id", "duplicate reviewer id"});
                continue;
            }
            reviewer_ix[r.reviewer_id] = c.reviewers_.size();
            c.reviewers_.push_back(std::move(r));
        }
        for (Business& b : businesses) {
            auto issues = validate_business(b);
            if (!issues.empty()) {
                rep.issues.insert(rep.issues.end(), issues.begin(), issues.end());
                continue;
            }
            if (business_ix.count(b.business_id)) {
                rep.issues.push_back(
                    {"businesses", 0, b.business_id, "business_id", "duplicate business id"});
                continue;
            }
            business_ix[b.business_id] = c.businesses_.size();
            c.businesses_.push_back(std::move(b));
        }

        std::map<std::string, bool> seen_review;
        for (Review& r : reviews) {
            auto issues = validate_review(r);
            if (!issues.empty()) {
                rep.issues.insert(rep.issues.end(), issues.begin(), issues.end());
                continue;
            }
            if (seen_review.count(r.review_id)) {
                rep.issues.push_back({"reviews", 0, r.review_id, "review_id", "duplicate review id"});
                continue;
            }
            if (!reviewer_ix.count(r.reviewer_id)) {
                rep.issues.push_back({"reviews", 0, r.review_id, "reviewer_id",
                                      "unknown reviewer '" + r.reviewer_id + "'"});
                continue;
            }
            if (!business_ix.count(r.business_id)) {
                rep.issues.push_back({"reviews", 0, r.review_id, "business_id",
                                      "unknown business '" + r.business_id + "'"});
                continue;
            }
            seen_review[r.review_id] = true;
            c.reviews_.push_back(std::move(r));
        }

        // Pass 2: the reviewer must predate their own reviews. A violating
        // reviewer is dropped along with their reviews.
        std::map<std::string, Date> earliest;
        for (const Review& r : c.reviews_) {
            auto it = earliest.find(r.reviewer_id);
            if (it == earliest.end() || r.date < it->second) earliest[r.reviewer_id] = r.date;
        }
        std::map<std::string, bool> bad_reviewer;
        {
            std::vector<Reviewer> kept;
            for (Reviewer& r : c.reviewers_) {
                auto it = earliest.find(r.reviewer_id);
                if (it != earliest.end() && it->second < r.join_date) {
                    rep.issues.push_back({"reviewers", 0, r.reviewer_id, "join_date",
                                          "join date is after this reviewer's earliest review"});
                    bad_reviewer[r.reviewer_id] = true;
                    continue;
                }
                kept.push_back(std::move(r));
            }
            c.reviewers_ = std::move(kept);
        }
        if (!bad_reviewer.empty()) {
            std::vector<Review> kept;
            for (Review& r : c.reviews_) {
                if (bad_reviewer.count(r.reviewer_id)) {
                    rep.issues.push_back({"reviews", 0, r.review_id, "reviewer_id",
                                          "reviewer dropped during validation"});
                    continue;
                }
                kept.push_back(std::move(r));
            }
            c.reviews_ = std::move(kept);
        }

        c.reindex();
        rep.reviews_kept = c.reviews_.size();
        rep.reviewers_kept = c.reviewers_.size();
        rep.businesses_kept = c.businesses_.size();
        return c;
    }

    const std::vector<Review>& reviews() const { return reviews_; }
    const std::vector<Reviewer>& reviewers() const { return reviewers_; }
    const std::vector<Business>& businesses() const { return businesses_; }

    const Reviewer& reviewer_of(const Review& r) const {
        return reviewers_[reviewer_index_.at(r.reviewer_id)];
    }
    const Business& business_of(const Review& r) const {
        return businesses_[business_index_.at(r.business_id)];
    }

    const std::vector<size_t>& reviews_by_reviewer(const std::string& reviewer_id) const {
        static const std::vector<size_t> none;
        auto it = by_reviewer_.find(reviewer_id);
        return it == by_reviewer_.end() ? none : it->second;
    }
    const std::vector<size_t>& reviews_by_business(const std::string& business_id) const {
        static const std::vector<size_t> none;
        auto it = by_business_.find(business_id);
        return it == by_business_.end() ? none : it->second;
    }

    // Kind shared by every business, or nullopt for a mixed corpus.
    std::optional<BusinessKind> uniform_kind() const {
        if (businesses_.empty()) return std::nullopt;
        BusinessKind k = businesses_.front().kind;
        for (const Business& b : businesses_)
            if (b.kind != k) return std::nullopt;
        return k;
    }

    std::optional<Date> max_review_date() const {
        std::optional<Date> m;
        for (const Review& r : reviews_)
            if (!m || *m < r.date) m = r.date;
        return m;
    }

    std::pair<long, long> class_counts(const LabelPolicy& policy = {}) const {
        long fake = 0, non_fake = 0;
        for (const Review& r : reviews_)
            (map_label(r.flag, policy) == Label::fake ? fake : non_fake)++;
        return {fake, non_fake};
    }

private:
    void reindex() {
        reviewer_index_.clear();
        business_index_.clear();
        by_reviewer_.clear();
        by_business_.clear();
        for (size_t i = 0; i < reviewers_.size(); ++i) reviewer_index_[reviewers_[i].reviewer_id] = i;
        for (size_t i = 0; i < businesses_.size(); ++i)
            business_index_[businesses_[i].business_id] = i;
        for (size_t i = 0; i < reviews_.size(); ++i) {
            by_reviewer_[reviews_[i].reviewer_id].push_back(i);
            by_business_[reviews_[i].business_id].push_back(i);
        }
    }

    std::vector<Review> reviews_;
    std::vector<Reviewer> reviewers_;
    std::vector<Business> businesses_;
    std::map<std::string, size_t> reviewer_index_, business_index_;
    std::map<std::string, std::vector<size_t>> by_reviewer_, by_business_;
};

// Uniform per-class subsample without replacement: n_per_class fake and
// n_per_class genuine reviews, with only the reviewers/businesses they touch.
inline ReviewCorpus balanced_sample(const ReviewCorpus& corpus, long n_per_class,
                                    std::uint64_t seed, const LabelPolicy& policy = {}) {
    if (n_per_class <= 0) throw ValidationError("n_per_class must be positive");
    std::vector<size_t> fake_ix, non_ix;
    for (size_t i = 0; i < corpus.reviews().size(); ++i)
        (map_label(corpus.reviews()[i].flag, policy) == Label::fake ? fake_ix : non_ix).push_back(i);
    if (static_cast<long>(fake_ix.size()) < n_per_class ||
        static_cast<long>(non_ix.size()) < n_per_class)
        throw ValidationError("not enough reviews per class: have " +
                              std::to_string(fake_ix.size()) + " fake / " +
                              std::to_string(non_ix.size()) + " non-fake, need " +
                              std::to_string(n_per_class) + " each");

    std::mt19937_64 rng(seed);
    std::shuffle(fake_ix.begin(), fake_ix.end(), rng);
    std::shuffle(non_ix.begin(), non_ix.end(), rng);
    fake_ix.resize(static_cast<size_t>(n_per_class));
    non_ix.resize(static_cast<size_t>(n_per_class));

    std::vector<size_t> keep = fake_ix;
    keep.insert(keep.end(), non_ix.begin(), non_ix.end());
    std::sort(keep.begin(), keep.end());  // preserve original corpus order

    std::vector<Review> reviews;
    std::map<std::string, bool> want_reviewer, want_business;
    for (size_t i : keep) {
        reviews.push_back(corpus.reviews()[i]);
        want_reviewer[reviews.back().reviewer_id] = true;
        want_business[reviews.back().business_id] = true;
    }
    std::vector<Reviewer> reviewers;
    for (const Reviewer& r : corpus.reviewers())
        if (want_reviewer.count(r.reviewer_id)) reviewers.push_back(r);
    std::vector<Business> businesses;
    for (const Business& b : corpus.businesses())
        if (want_business.count(b.business_id)) businesses.push_back(b);

    LoadReport rep;
    ReviewCorpus out = ReviewCorpus::build(std::move(reviews), std::move(reviewers),
                                           std::move(businesses), &rep);
    if (!rep.ok()) throw Error("internal: balanced_sample produced invalid corpus\n" + rep.to_text());
    return out;
}

}  // namespace opspam
