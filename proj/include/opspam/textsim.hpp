#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "opspam/util.hpp"

namespace opspam {

struct Token {
    std::string surface;             // as written
    std::string norm;                // lowercased, later lemmatized
    bool starts_with_capital = false;
};

using TokenSequence = std::vector<Token>;

// Maximal runs of ASCII letters/digits; everything else separates.
inline TokenSequence tokenize(std::string_view text) {
    TokenSequence out;
    size_t i = 0;
    auto is_word = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
    };
    while (i < text.size()) {
        while (i < text.size() && !is_word(text[i])) ++i;
        size_t j = i;
        while (j < text.size() && is_word(text[j])) ++j;
        if (j > i) {
            std::string_view run = text.substr(i, j - i);
            Token t;
            t.surface = std::string(run);
            t.starts_with_capital = run[0] >= 'A' && run[0] <= 'Z';
            t.norm = lower_ascii(run);
            out.push_back(std::move(t));
        }
        i = j;
    }
    return out;
}

namespace detail {

inline const std::map<std::string_view, std::string_view>& lemma_exceptions() {
    static const std::map<std::string_view, std::string_view> m = {
        {"ate", "eat"},       {"bought", "buy"},   {"brought", "bring"}, {"been", "be"},
        {"being", "be"},      {"came", "come"},    {"children", "child"},{"did", "do"},
        {"done", "do"},       {"drank", "drink"},  {"eaten", "eat"},     {"felt", "feel"},
        {"found", "find"},    {"gave", "give"},    {"given", "give"},    {"gone", "go"},
        {"got", "get"},       {"gotten", "get"},   {"had", "have"},      {"has", "have"},
        {"kept", "keep"},     {"left", "leave"},   {"made", "make"},     {"men", "man"},
        {"met", "meet"},      {"paid", "pay"},     {"people", "person"}, {"said", "say"},
        {"saw", "see"},       {"seen", "see"},     {"sold", "sell"},     {"spent", "spend"},
        {"taken", "take"},    {"thought", "think"},{"told", "tell"},     {"took", "take"},
        {"was", "be"},        {"went", "go"},      {"were", "be"},       {"women", "woman"},
        {"wrote", "write"},   {"written", "write"},
    };
    return m;
}

inline bool ends_with(std::string_view s, std::string_view suf) {
    return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

// Letters that commonly double before -ing/-ed ("stopped", "running").
// l/s/z excluded so "falling" keeps its stem intact.
inline bool undoubles(char c) {
    return c == 'b' || c == 'd' || c == 'f' || c == 'g' || c == 'm' || c == 'n' || c == 'p' ||
           c == 'r' || c == 't';
}

inline std::string lemma_step(const std::string& w) {
    auto& exc = lemma_exceptions();
    if (auto it = exc.find(w); it != exc.end()) return std::string(it->second);

    auto undouble = [](std::string s) {
        size_t n = s.size();
        if (n >= 3 && s[n - 1] == s[n - 2] && undoubles(s[n - 1])) s.pop_back();
        return s;
    };

    if (ends_with(w, "sses")) return w.substr(0, w.size() - 2);
    if (ends_with(w, "ies") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "ied") && w.size() >= 5) return w.substr(0, w.size() - 3) + "y";
    if (ends_with(w, "es") && w.size() >= 4) {
        char before = w[w.size() - 3];
        bool sh_ch = w.size() >= 5 && (ends_with(std::string_view(w).substr(0, w.size() - 2), "sh") ||
                                       ends_with(std::string_view(w).substr(0, w.size() - 2), "ch"));
        if (before == 's' || before == 'x' || before == 'z' || sh_ch)
            return w.substr(0, w.size() - 2);
    }
    if (ends_with(w, "ing") && w.size() >= 6) return undouble(w.substr(0, w.size() - 3));
    if (ends_with(w, "ed") && w.size() >= 5) return undouble(w.substr(0, w.size() - 2));
    if (ends_with(w, "s") && w.size() >= 4 && !ends_with(w, "ss") && !ends_with(w, "us") &&
        !ends_with(w, "is"))
        return w.substr(0, w.size() - 1);
    return w;
}

}  // namespace detail

// Small rule-based lemmatizer: irregular-form lookup plus -s/-ed/-ing suffix
// stripping, applied until the token stops changing (so the map is idempotent).
inline std::string lemma_of(const std::string& word) {
    std::string cur = word;
    for (int guard = 0; guard < 8; ++guard) {
        std::string next = detail::lemma_step(cur);
        if (next == cur) return cur;
        cur = std::move(next);
    }
    return cur;
}

inline TokenSequence lemmatize(TokenSequence tokens) {
    for (Token& t : tokens) t.norm = lemma_of(t.norm);
    return tokens;
}

inline const std::set<std::string_view>& english_stopwords() {
    static const std::set<std::string_view> s = {
        "a",    "about", "after", "again", "all",  "also",  "am",    "an",   "and",  "any",
        "are",  "as",    "at",    "be",    "but",  "by",    "can",   "do",   "for",  "from",
        "get",  "go",    "had",   "has",   "have", "he",    "her",   "here", "him",  "his",
        "how",  "i",     "if",    "in",    "into", "is",    "it",    "its",  "just", "me",
        "my",   "no",    "not",   "of",    "on",   "or",    "our",   "out",  "she",  "so",
        "some", "than",  "that",  "the",   "their","them",  "then",  "there","they", "this",
        "to",   "up",    "us",    "was",   "we",   "were",  "what",  "when", "which","who",
        "will", "with",  "would", "you",   "your",
    };
    return s;
}

inline TokenSequence remove_stopwords(const TokenSequence& tokens) {
    TokenSequence out;
    out.reserve(tokens.size());
    for (const Token& t : tokens)
        if (!english_stopwords().count(t.norm)) out.push_back(t);
    return out;
}

struct TextOptions {
    bool lemmatize = true;
    bool remove_stopwords = false;
};

inline TokenSequence preprocess(std::string_view text, const TextOptions& opt = {}) {
    TokenSequence seq = tokenize(text);
    if (opt.lemmatize) seq = lemmatize(std::move(seq));
    if (opt.remove_stopwords) seq = remove_stopwords(seq);
    return seq;
}

// ---------------------------------------------------------------------------
// Term weighting over one reviewer's reviews.
//
// For a term t appearing c times in a review, with M = number of reviews the
// reviewer wrote and df(t) = number of those reviews containing t:
//   NNC   raw = c
//   LTC   raw = (1 + ln c) * ln(M / df(t))
//   BM25  raw = c * ((k + 1) * c / (c + k)) * ln((M + 1) / df(t))
// Raw weights <= 0 are dropped, then the vector is scaled to unit L2 norm.
// ---------------------------------------------------------------------------

enum class Weighting { nnc, ltc, bm25 };

inline std::string_view weighting_name(Weighting w) {
    switch (w) {
        case Weighting::nnc: return "NNC";
        case Weighting::ltc: return "LTC";
        case Weighting::bm25: return "BM25";
    }
    return "?";
}

inline std::optional<Weighting> parse_weighting(std::string_view s) {
    std::string u = lower_ascii(s);
    if (u == "nnc") return Weighting::nnc;
    if (u == "ltc") return Weighting::ltc;
    if (u == "bm25") return Weighting::bm25;
    return std::nullopt;
}

struct WeightingScheme {
    Weighting variant = Weighting::ltc;
    double bm25_k = 1.2;  // saturation constant, only read by BM25
};

struct ReviewerTermStats {
    long review_count = 0;              // M
    std::map<std::string, long> df;     // reviews containing each term

    static ReviewerTermStats from_reviews(const std::vector<TokenSequence>& reviews) {
        ReviewerTermStats st;
        st.review_count = static_cast<long>(reviews.size());
        for (const TokenSequence& seq : reviews) {
            std::set<std::string_view> seen;
            for (const Token& t : seq) seen.insert(t.norm);
            for (std::string_view term : seen) ++st.df[std::string(term)];
        }
        return st;
    }
};

struct WeightedTermVector {
    std::map<std::string, double> weights;  // unit L2 norm unless empty
    Weighting scheme = Weighting::nnc;
};

inline WeightedTermVector weight_review(const TokenSequence& tokens, const ReviewerTermStats& stats,
                                        WeightingScheme scheme) {
    if (scheme.variant == Weighting::bm25 && !(scheme.bm25_k > 0))
        throw Error("BM25 k must be positive");
    std::map<std::string, long> counts;
    for (const Token& t : tokens) ++counts[t.norm];

    WeightedTermVector vec;
    vec.scheme = scheme.variant;
    double sumsq = 0.0;
    double M = static_cast<double>(stats.review_count);
    for (const auto& [term, c_] : counts) {
        auto it = stats.df.find(term);
        if (it == stats.df.end() || it->second <= 0)
            throw Error("term \"" + term + "\" missing from reviewer stats");
        double c = static_cast<double>(c_);
        double df = static_cast<double>(it->second);
        double raw = 0.0;
        switch (scheme.variant) {
            case Weighting::nnc: raw = c; break;
            case Weighting::ltc: raw = (1.0 + std::log(c)) * std::log(M / df); break;
            case Weighting::bm25: {
                double k = scheme.bm25_k;
                raw = c * ((k + 1.0) * c / (c + k)) * std::log((M + 1.0) / df);
                break;
            }
        }
        if (raw > 0.0) {
            vec.weights[term] = raw;
            sumsq += raw * raw;
        }
    }
    if (sumsq > 0.0) {
        double norm = std::sqrt(sumsq);
        for (auto& [term, w] : vec.weights) w /= norm;
    }
    return vec;
}

// Dot product of unit vectors; both must come from the same weighting scheme.
inline double cosine_similarity(const WeightedTermVector& u, const WeightedTermVector& v) {
    if (u.scheme != v.scheme) throw Error("cosine over mismatched weighting schemes");
    double s = 0.0;
    auto a = u.weights.begin(), b = v.weights.begin();
    while (a != u.weights.end() && b != v.weights.end()) {
        if (a->first < b->first)
            ++a;
        else if (b->first < a->first)
            ++b;
        else {
            s += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return std::clamp(s, 0.0, 1.0);
}

// Mean over the reviewer's reviews of the best cosine match among their other
// reviews. High values mean the reviewer repeats themselves.
inline double reviewer_content_similarity(const std::vector<TokenSequence>& reviews,
                                          WeightingScheme scheme) {
    size_t n = reviews.size();
    if (n <= 1) return 0.0;
    ReviewerTermStats stats = ReviewerTermStats::from_reviews(reviews);
    std::vector<WeightedTermVector> vecs;
    vecs.reserve(n);
    for (const TokenSequence& seq : reviews) vecs.push_back(weight_review(seq, stats, scheme));

    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            best = std::max(best, cosine_similarity(vecs[i], vecs[j]));
        }
        total += best;
    }
    return total / static_cast<double>(n);
}

// Fraction of tokens written with a leading capital letter.
inline double capital_diversity(const TokenSequence& tokens) {
    if (tokens.empty()) return 0.0;
    long caps = 0;
    for (const Token& t : tokens) caps += t.starts_with_capital ? 1 : 0;
    return static_cast<double>(caps) / static_cast<double>(tokens.size());
}

}  // namespace opspam
