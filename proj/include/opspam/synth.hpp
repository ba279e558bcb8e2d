#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "opspam/corpus.hpp"

namespace opspam {

// Knobs for the synthetic corpus. Every spam signal is expressed as a delta
// from the honest-reviewer baseline, so with all signals at zero the fake and
// genuine populations are drawn from identical distributions and only the
// flags differ. That makes it possible to build corpora whose labels depend
// on exactly one behavior.
struct SynthConfig {
    long n_reviewers = 1964;
    long n_businesses = 31;
    long n_reviews = 2060;
    double fake_fraction = 0.5;

    double duplicate_text_rate = 0.0;       // chance a repeat spam review copies an earlier one
    double burst_rate = 0.0;                // chance a repeat spam review lands 0-1 days after the last
    double rating_deviation_magnitude = 0.0;// rating shift (stars) applied to spam reviews
    double positive_skew = 0.0;             // chance a spam review is pinned to 5 stars
    double vote_suppression = 0.0;          // fraction shaved off spammers' useful/cool/funny counts

    double repeat_reviewer_rate = 0.35;     // chance a review goes to an already-active reviewer
    BusinessKind kind = BusinessKind::restaurant;
    std::uint64_t seed = 1;

    void validate() const {
        auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (n_reviewers < 1) throw ValidationError("synth: n_reviewers must be >= 1");
        if (n_businesses < 1) throw ValidationError("synth: n_businesses must be >= 1");
        if (n_reviews < 0) throw ValidationError("synth: n_reviews must be >= 0");
        if (!in01(fake_fraction)) throw ValidationError("synth: fake_fraction must lie in [0,1]");
        if (!in01(duplicate_text_rate) || !in01(burst_rate) || !in01(positive_skew) ||
            !in01(vote_suppression))
            throw ValidationError("synth: rates must lie in [0,1]");
        if (rating_deviation_magnitude < 0)
            throw ValidationError("synth: rating_deviation_magnitude must be >= 0");
        if (repeat_reviewer_rate < 0.0 || repeat_reviewer_rate >= 1.0)
            throw ValidationError("synth: repeat_reviewer_rate must lie in [0,1)");
        long n_fake = std::lround(fake_fraction * static_cast<double>(n_reviews));
        if (n_fake > 0 && n_fake < n_reviews && n_reviewers < 2)
            throw ValidationError("synth: need at least 2 reviewers for two classes");
    }
};

namespace detail {

inline const std::vector<std::string>& synth_common_words() {
    static const std::vector<std::string> w = {
        "the",  "a",     "and",   "was",    "is",    "very",   "really", "so",      "we",
        "i",    "they",  "had",   "have",   "great", "good",   "nice",   "bad",     "poor",
        "best", "worst", "again", "never",  "back",  "place",  "time",   "staff",   "friendly",
        "rude", "clean", "dirty", "price",  "worth", "money",  "came",   "went",    "got",
        "little", "big", "small", "busy",   "quiet", "loved",  "hated",  "amazing", "terrible",
        "ok",   "fine",  "just",  "always", "every", "highly", "recommend", "avoid", "visit",
        "here", "there", "nothing", "everything", "service", "experience", "quality", "spot",
        "wait", "long",  "quick", "slow",   "fresh", "old",    "new",    "definitely",
    };
    return w;
}

inline const std::vector<std::string>& synth_topic_words(BusinessKind kind) {
    static const std::vector<std::string> restaurant = {
        "food",    "menu",    "dish",     "pizza",   "burger", "pasta",  "salad",   "soup",
        "steak",   "chicken", "fish",     "sauce",   "flavor", "taste",  "portion", "plate",
        "dessert", "coffee",  "drink",    "wine",    "beer",   "table",  "waiter",  "waitress",
        "chef",    "kitchen", "lunch",    "dinner",  "brunch", "breakfast", "appetizer", "entree",
        "spicy",   "sweet",   "salty",    "crispy",  "tender", "juicy",  "bland",   "overcooked",
        "delicious", "tasty", "reservation", "patio", "seated", "server", "bill",   "tip",
    };
    static const std::vector<std::string> hotel = {
        "room",     "bed",     "pillow",   "sheets",  "bathroom", "shower",  "towel",   "lobby",
        "checkin",  "checkout","front",    "desk",    "concierge","elevator","floor",   "view",
        "window",   "balcony", "pool",     "gym",     "spa",      "breakfast", "buffet", "wifi",
        "parking",  "valet",   "location", "downtown","airport",  "shuttle", "noise",   "quiet",
        "comfortable", "spacious", "cramped", "smelly", "renovated", "dated", "housekeeping",
        "reception", "suite",  "king",     "double",  "booking",  "rate",    "night",   "stay",
    };
    return kind == BusinessKind::restaurant ? restaurant : hotel;
}

inline const std::vector<std::string>& synth_cities() {
    static const std::vector<std::string> c = {
        "Phoenix, AZ",   "Scottsdale, AZ", "Tempe, AZ",    "Mesa, AZ",      "Chandler, AZ",
        "Las Vegas, NV", "Henderson, NV",  "Madison, WI",  "Pittsburgh, PA", "Charlotte, NC",
        "Urbana, IL",    "Champaign, IL",  "Gilbert, AZ",  "Peoria, AZ",    "Glendale, AZ",
        "Surprise, AZ",  "Avondale, AZ",   "Goodyear, AZ", "Tucson, AZ",    "Flagstaff, AZ",
    };
    return c;
}

inline const std::vector<std::string>& synth_first_names() {
    static const std::vector<std::string> n = {
        "Alex",  "Sam",    "Jordan", "Taylor", "Casey",  "Morgan", "Riley", "Jamie",
        "Avery", "Quinn",  "Dana",   "Drew",   "Jesse",  "Kelly",  "Lee",   "Pat",
        "Robin", "Shawn",  "Terry",  "Devon",  "Maria",  "John",   "Sarah", "David",
        "Emma",  "Chris",  "Nina",   "Omar",   "Priya",  "Wei",    "Yuki",  "Leila",
    };
    return n;
}

}  // namespace detail

// Deterministic pure function of the config: same config (seed included) gives
// a byte-identical corpus.
inline ReviewCorpus generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    auto uniform01 = [&] { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); };
    auto uniform_int = [&](long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(rng);
    };
    std::normal_distribution<double> rating_noise(0.0, 0.9);
    std::normal_distribution<double> quality_noise(3.7, 0.6);
    std::normal_distribution<double> friend_noise(1.8, 1.2);

    const long n_fake = std::lround(cfg.fake_fraction * static_cast<double>(cfg.n_reviews));
    const long n_honest = cfg.n_reviews - n_fake;
    const Date window_start = *make_date(2014, 1, 1);
    const long window_days = 730;

    // Businesses with a latent quality that drives everyone's ratings.
    std::vector<Business> businesses(static_cast<size_t>(cfg.n_businesses));
    std::vector<double> quality(static_cast<size_t>(cfg.n_businesses));
    for (long i = 0; i < cfg.n_businesses; ++i) {
        Business& b = businesses[static_cast<size_t>(i)];
        char id[32];
        std::snprintf(id, sizeof(id), "B%05ld", i + 1);
        b.business_id = id;
        b.kind = cfg.kind;
        b.name = std::string(cfg.kind == BusinessKind::restaurant ? "Cafe " : "Hotel ") +
                 std::to_string(i + 1);
        b.location = detail::synth_cities()[static_cast<size_t>(
            uniform_int(0, static_cast<long>(detail::synth_cities().size()) - 1))];
        double q = std::clamp(quality_noise(rng), 1.5, 4.8);
        quality[static_cast<size_t>(i)] = q;
        b.site_rating = std::clamp(std::round(q * 10.0) / 10.0, 1.0, 5.0);
    }

    std::vector<Reviewer> reviewers(static_cast<size_t>(cfg.n_reviewers));
    for (long i = 0; i < cfg.n_reviewers; ++i) {
        Reviewer& r = reviewers[static_cast<size_t>(i)];
        char id[32];
        std::snprintf(id, sizeof(id), "R%05ld", i + 1);
        r.reviewer_id = id;
        const auto& names = detail::synth_first_names();
        r.name = names[static_cast<size_t>(i) % names.size()] + " " +
                 static_cast<char>('A' + (i / names.size()) % 26) + ".";
        r.location = detail::synth_cities()[static_cast<size_t>(
            uniform_int(0, static_cast<long>(detail::synth_cities().size()) - 1))];
        r.join_date = window_start.plus_days(-1 - uniform_int(0, 2100));
    }

    // Split reviewers into a spammer pool and an honest pool, sized in
    // proportion to each class's review volume so that per-reviewer review
    // counts are distributed the same way on both sides.
    std::vector<size_t> pool(static_cast<size_t>(cfg.n_reviewers));
    for (size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    long n_spammers = 0;
    if (n_fake > 0) {
        n_spammers = cfg.n_reviews > 0
                         ? std::lround(static_cast<double>(cfg.n_reviewers) *
                                       static_cast<double>(n_fake) / static_cast<double>(cfg.n_reviews))
                         : 0;
        n_spammers = std::clamp<long>(n_spammers, 1, cfg.n_reviewers - (n_honest > 0 ? 1 : 0));
    }
    std::vector<size_t> spam_pool(pool.begin(), pool.begin() + n_spammers);
    std::vector<size_t> honest_pool(pool.begin() + n_spammers, pool.end());

    struct Draft {
        size_t reviewer;
        size_t business;
        Date date;
        int rating;
        std::string content;
        bool fake;
    };
    std::vector<Draft> drafts;
    drafts.reserve(static_cast<size_t>(cfg.n_reviews));

    std::vector<std::optional<Date>> anchor(static_cast<size_t>(cfg.n_reviewers));
    std::vector<Date> last_date(static_cast<size_t>(cfg.n_reviewers));
    std::vector<std::vector<size_t>> written_by(static_cast<size_t>(cfg.n_reviewers));

    auto make_text = [&]() {
        const auto& common = detail::synth_common_words();
        const auto& topic = detail::synth_topic_words(cfg.kind);
        long len = 8 + uniform_int(0, 24);
        std::string out;
        for (long w = 0; w < len; ++w) {
            const auto& src = uniform01() < 0.6 ? common : topic;
            std::string word = src[static_cast<size_t>(uniform_int(0, static_cast<long>(src.size()) - 1))];
            bool cap = w == 0 || uniform01() < 0.04;
            if (cap && word[0] >= 'a' && word[0] <= 'z')
                word[0] = static_cast<char>(word[0] - 'a' + 'A');
            if (w) out += ' ';
            out += word;
            if (w + 1 < len && uniform01() < 0.12) out += '.';
        }
        out += '.';
        return out;
    };

    // One class at a time; the procedure is identical, only the signal knobs
    // read differently for spam.
    auto emit_class = [&](long count, std::vector<size_t>& fresh, bool fake) {
        std::vector<size_t> used;
        size_t next_fresh = 0;
        for (long k = 0; k < count; ++k) {
            size_t who;
            bool repeat = !used.empty() &&
                          (uniform01() < cfg.repeat_reviewer_rate || next_fresh >= fresh.size());
            if (repeat)
                who = used[static_cast<size_t>(uniform_int(0, static_cast<long>(used.size()) - 1))];
            else {
                who = fresh[next_fresh++];
                used.push_back(who);
            }

            Draft d;
            d.fake = fake;
            d.reviewer = who;
            d.business = static_cast<size_t>(uniform_int(0, cfg.n_businesses - 1));

            if (!anchor[who]) {
                anchor[who] = window_start.plus_days(uniform_int(0, window_days - 1));
                d.date = *anchor[who];
            } else if (fake && uniform01() < cfg.burst_rate) {
                d.date = last_date[who].plus_days(uniform_int(0, 1));
            } else {
                long off = uniform_int(0, 400);
                Date cand = anchor[who]->plus_days(off);
                Date limit = window_start.plus_days(window_days - 1);
                d.date = cand < limit ? cand : limit;
            }
            last_date[who] = d.date;

            double q = quality[d.business];
            if (fake && uniform01() < cfg.positive_skew) {
                d.rating = 5;
            } else {
                double shift = 0.0;
                if (fake) {
                    double dir = uniform01() < 0.5 ? 1.0 : -1.0;
                    shift = dir * cfg.rating_deviation_magnitude;
                }
                d.rating = static_cast<int>(
                    std::clamp<long>(std::lround(q + shift + rating_noise(rng)), 1, 5));
            }

            bool copy = fake && !written_by[who].empty() && uniform01() < cfg.duplicate_text_rate;
            if (copy) {
                size_t src = written_by[who][static_cast<size_t>(
                    uniform_int(0, static_cast<long>(written_by[who].size()) - 1))];
                d.content = drafts[src].content;
            } else {
                d.content = make_text();
            }

            written_by[who].push_back(drafts.size());
            drafts.push_back(std::move(d));
        }
    };
    emit_class(n_fake, spam_pool, true);
    emit_class(n_honest, honest_pool, false);

    // Interleave the two blocks so the emitted files don't expose the labels
    // through record order.
    std::vector<size_t> order(drafts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Review> reviews;
    reviews.reserve(drafts.size());
    std::vector<long> biz_count(static_cast<size_t>(cfg.n_businesses), 0);
    for (size_t pos = 0; pos < order.size(); ++pos) {
        const Draft& d = drafts[order[pos]];
        Review r;
        char id[32];
        std::snprintf(id, sizeof(id), "V%06zu", pos + 1);
        r.review_id = id;
        r.reviewer_id = reviewers[d.reviewer].reviewer_id;
        r.business_id = businesses[d.business].business_id;
        r.date = d.date;
        r.content = d.content;
        r.rating = d.rating;
        r.flag = d.fake ? Flag::y : Flag::n;
        ++biz_count[d.business];
        reviews.push_back(std::move(r));
    }

    // Per-review site votes: spammers' reviews attract fewer when suppression
    // is on. Drawn per review in corpus order, class only scales the result.
    std::vector<bool> is_spammer(static_cast<size_t>(cfg.n_reviewers), false);
    for (size_t s : spam_pool) is_spammer[s] = true;
    std::poisson_distribution<long> vote_u(1.4), vote_c(0.7), vote_f(0.5);
    for (size_t pos = 0; pos < order.size(); ++pos) {
        const Draft& d = drafts[order[pos]];
        double keep = d.fake ? 1.0 - cfg.vote_suppression : 1.0;
        reviews[pos].useful_count = static_cast<long>(std::floor(vote_u(rng) * keep));
        reviews[pos].cool_count = static_cast<long>(std::floor(vote_c(rng) * keep));
        reviews[pos].funny_count = static_cast<long>(std::floor(vote_f(rng) * keep));
    }

    // Reviewer profiles, one fixed block of draws per reviewer regardless of
    // class; suppression only rescales.
    for (long i = 0; i < cfg.n_reviewers; ++i) {
        Reviewer& r = reviewers[static_cast<size_t>(i)];
        long in_corpus = static_cast<long>(written_by[static_cast<size_t>(i)].size());
        r.review_count = in_corpus + uniform_int(0, 3);
        r.friend_count = std::max(0L, std::lround(std::exp(friend_noise(rng))) - 1);
        double lam = 1.0 + 1.6 * static_cast<double>(r.review_count);
        long useful = std::poisson_distribution<long>(lam)(rng);
        long cool = std::poisson_distribution<long>(0.55 * lam)(rng);
        long funny = std::poisson_distribution<long>(0.4 * lam)(rng);
        long tips = std::poisson_distribution<long>(0.3 * lam)(rng);
        double keep = is_spammer[static_cast<size_t>(i)] ? 1.0 - cfg.vote_suppression : 1.0;
        r.useful_count = static_cast<long>(std::floor(useful * keep));
        r.cool_count = static_cast<long>(std::floor(cool * keep));
        r.funny_count = static_cast<long>(std::floor(funny * keep));
        r.tip_count = tips;
    }
    for (long i = 0; i < cfg.n_businesses; ++i)
        businesses[static_cast<size_t>(i)].review_count =
            biz_count[static_cast<size_t>(i)] + uniform_int(0, 5);

    LoadReport rep;
    ReviewCorpus corpus = ReviewCorpus::build(std::move(reviews), std::move(reviewers),
                                              std::move(businesses), &rep);
    if (!rep.ok())
        throw Error("internal: synthetic generator produced invalid corpus\n" + rep.to_text());
    return corpus;
}

}  // namespace opspam
