// End-to-end acceptance gate. Each numbered check prints one PASS/FAIL line;
// the exit code is the number of failures. Runs standalone, no framework.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <set>
#include <sstream>

#include <opspam/driver.hpp>

#include "helpers.hpp"
#include "oracles.hpp"

using namespace opspam;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

void require_close(double got, double want, double tol, const std::string& what) {
    if (!(std::fabs(got - want) <= tol))
        throw Failure(what + ": got " + std::to_string(got) + ", want " + std::to_string(want) +
                      " (tol " + std::to_string(tol) + ")");
}

int scheme_code(Weighting w) {
    return w == Weighting::nnc ? 0 : (w == Weighting::ltc ? 1 : 2);
}

oracle::Doc to_doc(const TokenSequence& seq) {
    oracle::Doc d;
    for (const Token& t : seq) d.push_back(t.norm);
    return d;
}

// random token drawn from a tiny vocabulary so document-frequency paths vary
std::string rand_word(std::mt19937_64& rng, int vocab) {
    static const char* words[] = {"great", "food",  "place", "service", "bad",   "love",
                                  "stay",  "staff", "clean", "price",   "again", "never"};
    std::uniform_int_distribution<int> pick(0, vocab - 1);
    return words[pick(rng)];
}

std::vector<TokenSequence> random_history(std::mt19937_64& rng, int max_reviews, int vocab) {
    std::uniform_int_distribution<int> n_docs(1, max_reviews), n_words(1, 12);
    std::vector<TokenSequence> docs;
    int n = n_docs(rng);
    for (int i = 0; i < n; ++i) {
        std::string text;
        int w = n_words(rng);
        for (int j = 0; j < w; ++j) {
            text += rand_word(rng, vocab);
            text += ' ';
        }
        docs.push_back(tokenize(text));
    }
    return docs;
}

ReviewCorpus single_reviewer_corpus(std::mt19937_64& rng, std::vector<long>& day_serials,
                                    std::vector<int>& ratings) {
    std::uniform_int_distribution<int> n_dist(1, 15), rating(1, 5), day(0, 60);
    int n = n_dist(rng);
    std::vector<Review> reviews;
    Date base = *parse_date("2015-01-01");
    for (int i = 0; i < n; ++i) {
        int d = day(rng), q = rating(rng);
        day_serials.push_back(base.plus_days(d).serial);
        ratings.push_back(q);
        reviews.push_back(testutil::mk_review("v" + std::to_string(i), "r1", "b1",
                                              format_date(base.plus_days(d)), q));
    }
    std::vector<Reviewer> reviewers = {testutil::mk_reviewer("r1", "06-15-2012")};
    std::vector<Business> businesses = {testutil::mk_business("b1")};
    return ReviewCorpus::build(std::move(reviews), std::move(reviewers), std::move(businesses));
}

// shared 2-D fixtures for the classifier checks
void separable_fixture(Matrix& X, std::vector<Label>& y) {
    X = {{0.0, 1.0}, {1.0, 0.5}, {2.0, 1.5}, {3.5, 0.2}, {4.0, 1.2}, {5.0, 0.8},
         {0.5, 0.0}, {4.5, 0.4}};
    y = {Label::non_fake, Label::non_fake, Label::non_fake, Label::fake,
         Label::fake,     Label::fake,     Label::non_fake, Label::fake};
}

void noisy_fixture(Matrix& train_x, std::vector<Label>& train_y, Matrix& test_x,
                   std::vector<Label>& test_y, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 400; ++i) {
        double a = u(rng), b = u(rng);
        Label l = a + b > 1.0 ? Label::fake : Label::non_fake;
        if (u(rng) < 0.12) l = l == Label::fake ? Label::non_fake : Label::fake;
        train_x.push_back({a, b});
        train_y.push_back(l);
    }
    for (int i = 0; i < 300; ++i) {
        double a = u(rng), b = u(rng);
        if (std::fabs(a + b - 1.0) < 0.08) continue;
        test_x.push_back({a, b});
        test_y.push_back(a + b > 1.0 ? Label::fake : Label::non_fake);
    }
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("opspam-acceptance-" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp_path(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), "cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// ---------------------------------------------------------------------------
// 1. every formula matches an independent oracle on randomized instances
// ---------------------------------------------------------------------------
void criterion_formulas() {
    std::mt19937_64 rng(20240901);

    // term weights, all three schemes
    for (Weighting w : {Weighting::nnc, Weighting::ltc, Weighting::bm25}) {
        for (int i = 0; i < 100; ++i) {
            auto docs = random_history(rng, 8, 6);
            auto stats = ReviewerTermStats::from_reviews(docs);
            std::vector<oracle::Doc> odocs;
            for (const auto& d : docs) odocs.push_back(to_doc(d));
            WeightingScheme scheme{w, 1.2};
            for (const auto& doc : docs) {
                WeightedTermVector got = weight_review(doc, stats, scheme);
                auto want = oracle::weigh(to_doc(doc), odocs, scheme_code(w), 1.2);
                require(got.weights.size() == want.size(), "weight vector size mismatch");
                for (const auto& [term, val] : want)
                    require_close(got.weights.at(term), val, 1e-9, "weight of '" + term + "'");
            }
        }
    }

    // reviewer content similarity
    for (int i = 0; i < 100; ++i) {
        auto docs = random_history(rng, 10, 8);
        Weighting w = i % 3 == 0 ? Weighting::nnc : (i % 3 == 1 ? Weighting::ltc : Weighting::bm25);
        std::vector<oracle::Doc> odocs;
        for (const auto& d : docs) odocs.push_back(to_doc(d));
        require_close(reviewer_content_similarity(docs, {w, 1.2}),
                      oracle::rcs(odocs, scheme_code(w), 1.2), 1e-9, "rcs");
    }

    // the eight behavioral features
    for (int i = 0; i < 100; ++i) {
        std::vector<long> days;
        std::vector<int> ratings;
        ReviewCorpus c = single_reviewer_corpus(rng, days, ratings);
        ReviewerHistory h = ReviewerHistory::of(c, c.reviewers()[0]);
        require_close(average_posting_rate(h), oracle::average_posting_rate(days), 1e-9,
                      "average_posting_rate");
        require_close(positive_ratio(h), oracle::positive_ratio(ratings), 1e-9, "positive_ratio");
        require_close(positive_to_negative_ratio(h), oracle::positive_to_negative_ratio(ratings),
                      1e-9, "positive_to_negative_ratio");
        require(max_posting_rate(h) == oracle::max_posting_rate(days), "max_posting_rate");
        require(review_duration(h) == oracle::review_duration(days), "review_duration");
        ProductRatingIndex ix = index_business_ratings(c);
        for (const Review& rv : c.reviews())
            require_close(reviewer_deviation(rv, ix),
                          oracle::reviewer_deviation(rv.rating, ratings), 1e-9,
                          "reviewer_deviation");
        // membership length against a hand-validated calendar delta
        std::uniform_int_distribution<int> yy(2013, 2019), mm(1, 12), dd(1, 28);
        int y = yy(rng), m = mm(rng), d = dd(rng);
        char buf[16];
        std::snprintf(buf, sizeof buf, "%02d-%02d-%04d", m, d, y);
        require(membership_length(*h.reviewer, *parse_date(buf)) ==
                    oracle::days_between(2012, 6, 15, y, m, d),
                "membership_length");
        // content length counts raw tokens
        std::uniform_int_distribution<int> n_words(0, 25);
        int k = n_words(rng);
        std::string text;
        for (int j = 0; j < k; ++j) {
            text += rand_word(rng, 12);
            text += j % 3 == 0 ? ", " : " ";
        }
        Review probe = testutil::mk_review("p", "r1", "b1", "01-01-2015", 3, text);
        require(content_length(probe) == k, "content_length");
    }

    // capital diversity
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> n_words(0, 20), coin(0, 1);
        int k = n_words(rng);
        std::string text;
        std::vector<bool> caps;
        for (int j = 0; j < k; ++j) {
            std::string w = rand_word(rng, 12);
            bool cap = coin(rng) == 1;
            if (cap) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            caps.push_back(cap);
            text += w;
            text += ' ';
        }
        require_close(capital_diversity(tokenize(text)), oracle::capital_diversity(caps), 1e-9,
                      "capital_diversity");
    }

    // gini purity
    std::uniform_int_distribution<long> count(0, 60);
    int gini_checked = 0;
    while (gini_checked < 100) {
        long a = count(rng), b = count(rng);
        if (a + b == 0) continue;
        require_close(gini_counts(a, b), oracle::gini(a, b), 1e-9, "gini");
        ++gini_checked;
    }

    // the four metrics
    std::uniform_int_distribution<long> cell(0, 50);
    int metrics_checked = 0;
    while (metrics_checked < 100) {
        ConfusionCounts c{cell(rng), cell(rng), cell(rng), cell(rng)};
        if (c.total() == 0) continue;
        MetricsReport got = metrics(c);
        oracle::Metrics want = oracle::metrics(c.t_fake, c.t_non_fake, c.f_fake, c.f_non_fake);
        require_close(got.precision, want.precision, 1e-9, "precision");
        require_close(got.recall, want.recall, 1e-9, "recall");
        require_close(got.f1, want.f1, 1e-9, "f1");
        require_close(got.accuracy, want.accuracy, 1e-9, "accuracy");
        ++metrics_checked;
    }
}

// ---------------------------------------------------------------------------
// 2. RCS equals exhaustive enumeration under all three schemes
// ---------------------------------------------------------------------------
void criterion_rcs_brute_force() {
    std::mt19937_64 rng(7081);
    for (int i = 0; i < 110; ++i) {
        std::uniform_int_distribution<int> n_docs(0, 20);
        std::vector<TokenSequence> docs;
        int n = n_docs(rng);
        for (int j = 0; j < n; ++j) {
            std::uniform_int_distribution<int> n_words(1, 10);
            std::string text;
            int w = n_words(rng);
            for (int q = 0; q < w; ++q) {
                text += rand_word(rng, 8);
                text += ' ';
            }
            docs.push_back(tokenize(text));
        }
        std::vector<oracle::Doc> odocs;
        for (const auto& d : docs) odocs.push_back(to_doc(d));
        for (Weighting w : {Weighting::nnc, Weighting::ltc, Weighting::bm25})
            require_close(reviewer_content_similarity(docs, {w, 1.2}),
                          oracle::rcs(odocs, scheme_code(w), 1.2), 1e-12,
                          std::string("rcs under ") + std::string(weighting_name(w)));
    }
}

// ---------------------------------------------------------------------------
// 3. importance scores always total 100
// ---------------------------------------------------------------------------
void criterion_importance_sums() {
    std::mt19937_64 rng(333);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> nd(2, 6), nn(40, 160), nt(1, 30);
    for (int i = 0; i < 15; ++i) {
        int d = nd(rng), n = nn(rng);
        Matrix X;
        std::vector<Label> y;
        for (int r = 0; r < n; ++r) {
            std::vector<double> row;
            for (int f = 0; f < d; ++f) row.push_back(u(rng));
            // labels lean on column 0 so the forest finds real splits
            y.push_back(row[0] + 0.3 * u(rng) > 0.65 ? Label::fake : Label::non_fake);
            X.push_back(std::move(row));
        }
        auto [fake, non] = [&] {
            long a = 0, b = 0;
            for (Label l : y) (l == Label::fake ? a : b)++;
            return std::pair<long, long>(a, b);
        }();
        if (fake == 0 || non == 0) continue;
        ForestParams fp;
        fp.n_trees = nt(rng);
        fp.seed = rng();
        ForestModel m = train_forest(X, y, {}, {}, fp);
        double sum = 0.0;
        for (const auto& [name, score] : forest_importance(m)) {
            require(score >= 0.0, "negative importance score");
            sum += score;
        }
        require_close(sum, 100.0, 1e-6, "importance sum");
    }

    // and on a realistic pipeline model
    SynthConfig sc;
    sc.n_reviews = 400;
    sc.n_reviewers = 300;
    sc.n_businesses = 12;
    sc.rating_deviation_magnitude = 1.5;
    sc.duplicate_text_rate = 0.4;
    sc.seed = 8;
    ReviewCorpus corpus = generate_synthetic(sc);
    FeatureMatrix fm = build_feature_matrix(corpus, FeatureSetSpec::named("FS2"),
                                            {Weighting::nnc});
    ForestParams fp;
    fp.n_trees = 40;
    fp.seed = 9;
    ForestModel m = train_forest(fm.rows, fm.labels, fm.columns, {}, fp);
    double sum = 0.0;
    for (const auto& [name, score] : forest_importance(m)) sum += score;
    require_close(sum, 100.0, 1e-6, "importance sum on the pipeline model");
}

// ---------------------------------------------------------------------------
// 4. adding reviewer deviation (FS2 over FS1) helps on deviation-driven labels
// ---------------------------------------------------------------------------
void criterion_fs2_over_fs1() {
    auto started = std::chrono::steady_clock::now();
    int wins = 0;
    TrainParams tp;
    tp.tree.max_depth = 12;
    tp.forest.n_trees = 25;
    SamplingPlan none{SamplingStrategy::none, 0};
    for (int s = 1; s <= 10; ++s) {
        SynthConfig sc;  // 2060 balanced restaurant reviews
        sc.rating_deviation_magnitude = 1.5;
        sc.duplicate_text_rate = 0.3;
        sc.positive_skew = 0.2;
        sc.seed = 1000 + static_cast<std::uint64_t>(s);
        ReviewCorpus corpus = generate_synthetic(sc);
        FeatureMatrix fs1 = build_feature_matrix(corpus, FeatureSetSpec::named("FS1"),
                                                 {Weighting::nnc});
        FeatureMatrix fs2 = build_feature_matrix(corpus, FeatureSetSpec::named("FS2"),
                                                 {Weighting::nnc});
        std::uint64_t fold_seed = mix_seed(static_cast<std::uint64_t>(s), 1);
        tp.forest.seed = mix_seed(static_cast<std::uint64_t>(s), 3);
        CvReport r1 = cross_validate(fs1, ClassifierKind::forest, tp, none, 10, fold_seed);
        CvReport r2 = cross_validate(fs2, ClassifierKind::forest, tp, none, 10, fold_seed);
        if (r2.averaged.accuracy >= r1.averaged.accuracy) ++wins;
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();
    require(wins >= 8, "FS2 won only " + std::to_string(wins) + "/10 seeds");
    require(elapsed < 120.0, "over the 2-minute budget: " + std::to_string(elapsed) + "s");
    std::cout << "    (FS2 >= FS1 in " << wins << "/10 seeds, " << format_fixed(elapsed, 1)
              << "s)\n";
}

// ---------------------------------------------------------------------------
// 5. importance ranking tracks the planted signal
// ---------------------------------------------------------------------------
void criterion_importance_ranking() {
    auto rank_of = [](const std::vector<std::pair<std::string, double>>& table,
                      const std::string& name) {
        for (size_t i = 0; i < table.size(); ++i)
            if (table[i].first == name) return static_cast<int>(i) + 1;
        return -1;
    };
    auto importance_for = [&](double deviation, double votes) {
        SynthConfig sc;
        sc.n_reviews = 800;
        sc.n_reviewers = 600;
        sc.n_businesses = 20;
        sc.rating_deviation_magnitude = deviation;
        sc.vote_suppression = votes;
        sc.seed = 17;
        ReviewCorpus corpus = generate_synthetic(sc);
        FeatureMatrix fm = build_feature_matrix(corpus, FeatureSetSpec::named("FS2"),
                                                {Weighting::nnc});
        ForestParams fp;
        fp.n_trees = 50;
        fp.seed = 23;
        return forest_importance(train_forest(fm.rows, fm.labels, fm.columns, {}, fp));
    };
    int dev_rank = rank_of(importance_for(2.0, 0.0), "reviewer_deviation");
    require(dev_rank >= 1 && dev_rank <= 3,
            "deviation-driven labels: reviewer_deviation ranked " + std::to_string(dev_rank));
    int vote_rank = rank_of(importance_for(0.0, 0.9), "reviewer_deviation");
    require(vote_rank > 3,
            "vote-driven labels: reviewer_deviation still ranked " + std::to_string(vote_rank));
    std::cout << "    (deviation labels -> rank " << dev_rank << ", vote labels -> rank "
              << vote_rank << ")\n";
}

// ---------------------------------------------------------------------------
// 6. classifier sanity and the shared-folds comparison table
// ---------------------------------------------------------------------------
void criterion_classifier_sanity() {
    Matrix X;
    std::vector<Label> y;
    separable_fixture(X, y);
    auto tree = train_tree(X, y);
    for (size_t i = 0; i < X.size(); ++i)
        require(predict_tree(tree.get(), X[i]) == y[i], "tree missed a separable row");
    SvmParams sp;
    sp.C = 100.0;
    sp.epochs = 300;
    LinearSvmModel svm = train_svm(X, y, {}, sp);
    for (size_t i = 0; i < X.size(); ++i)
        require(predict_row(svm, X[i]) == y[i], "svm missed a separable row");

    Matrix tx;
    std::vector<Label> ty;
    Matrix nx;
    std::vector<Label> ny;
    noisy_fixture(nx, ny, tx, ty, 97531);
    auto noisy_tree = train_tree(nx, ny);
    ForestParams fp;
    fp.n_trees = 40;
    fp.seed = 5;
    ForestModel forest = train_forest(nx, ny, {}, {}, fp);
    long tree_hits = 0, forest_hits = 0;
    for (size_t i = 0; i < tx.size(); ++i) {
        tree_hits += predict_tree(noisy_tree.get(), tx[i]) == ty[i] ? 1 : 0;
        forest_hits += predict_row(forest, tx[i]) == ty[i] ? 1 : 0;
    }
    require(forest_hits >= tree_hits,
            "forest (" + std::to_string(forest_hits) + ") under tree (" +
                std::to_string(tree_hits) + ") on the noisy fixture");

    // rf vs svm on shared folds
    SynthConfig sc;
    sc.n_reviews = 400;
    sc.n_reviewers = 300;
    sc.n_businesses = 12;
    sc.rating_deviation_magnitude = 1.5;
    sc.duplicate_text_rate = 0.4;
    sc.seed = 31;
    ReviewCorpus corpus = generate_synthetic(sc);
    FeatureMatrix fm = build_feature_matrix(corpus, FeatureSetSpec::named("FS2"),
                                            {Weighting::nnc});
    TrainParams tp;
    tp.forest.n_trees = 20;
    tp.forest.seed = 3;
    SamplingPlan none{SamplingStrategy::none, 0};
    CvReport rf = cross_validate(fm, ClassifierKind::forest, tp, none, 5, 77);
    CvReport sv = cross_validate(fm, ClassifierKind::svm, tp, none, 5, 77);
    require(rf.fold_test_rows == sv.fold_test_rows, "rf and svm saw different folds");
    std::cout << "    classifier     precision    recall        f1  accuracy\n";
    const std::pair<const char*, const CvReport*> table[] = {{"rf", &rf}, {"svm", &sv}};
    for (const auto& [name, rep] : table) {
        std::cout << "    " << name << std::string(13 - std::string(name).size(), ' ')
                  << format_fixed(rep->averaged.precision, 3) << "    "
                  << format_fixed(rep->averaged.recall, 3) << "    "
                  << format_fixed(rep->averaged.f1, 3) << "    "
                  << format_fixed(rep->averaged.accuracy, 3) << "\n";
    }
}

// ---------------------------------------------------------------------------
// 7. sampling invariants
// ---------------------------------------------------------------------------
void criterion_sampling() {
    auto matrix_with = [](long n_fake, long n_non) {
        FeatureMatrix m;
        m.columns = {"x"};
        m.n_dense = 1;
        long made_fake = 0, made_non = 0;
        long i = 0;
        while (made_fake + made_non < n_fake + n_non) {
            bool fake = (i % 2 == 0 && made_fake < n_fake) || made_non >= n_non;
            m.rows.push_back({static_cast<double>(i)});
            m.labels.push_back(fake ? Label::fake : Label::non_fake);
            m.review_ids.push_back((fake ? "f" : "n") + std::to_string(i));
            (fake ? made_fake : made_non)++;
            ++i;
        }
        return m;
    };

    // the canonical 97/3 example
    FeatureMatrix skew = matrix_with(3, 97);
    FeatureMatrix under = apply_sampling(skew, {SamplingStrategy::under, 11});
    auto [uf, un] = under.class_counts();
    require(uf == 3 && un == 3, "97/3 undersample gave " + std::to_string(uf) + "/" +
                                    std::to_string(un));
    // undersample output is a sub-multiset of the input, in input order
    {
        size_t cursor = 0;
        for (const std::string& id : under.review_ids) {
            while (cursor < skew.review_ids.size() && skew.review_ids[cursor] != id) ++cursor;
            require(cursor < skew.review_ids.size(), "undersample invented or reordered a row");
            ++cursor;
        }
    }

    FeatureMatrix over = apply_sampling(skew, {SamplingStrategy::over, 11});
    auto [of, on] = over.class_counts();
    require(of == 97 && on == 97, "3/97 oversample gave " + std::to_string(of) + "/" +
                                      std::to_string(on));
    require(over.rows.size() >= skew.rows.size(), "oversample shrank the data");
    for (size_t i = 0; i < skew.rows.size(); ++i)
        require(over.review_ids[i] == skew.review_ids[i], "oversample disturbed the originals");
    for (size_t i = skew.rows.size(); i < over.rows.size(); ++i)
        require(over.labels[i] == Label::fake, "oversample appended a majority row");

    // randomized: equality after sampling, determinism
    std::mt19937_64 rng(404);
    std::uniform_int_distribution<long> nf(1, 40), nn(1, 40);
    for (int i = 0; i < 25; ++i) {
        FeatureMatrix m = matrix_with(nf(rng), nn(rng));
        auto [f0, n0] = m.class_counts();
        FeatureMatrix u = apply_sampling(m, {SamplingStrategy::under, rng()});
        auto [f1, n1] = u.class_counts();
        require(f1 == n1 && f1 == std::min(f0, n0), "undersample class counts");
        FeatureMatrix o = apply_sampling(m, {SamplingStrategy::over, rng()});
        auto [f2, n2] = o.class_counts();
        require(f2 == n2 && f2 == std::max(f0, n0), "oversample class counts");
        std::uint64_t seed = rng();
        FeatureMatrix a = apply_sampling(m, {SamplingStrategy::under, seed});
        FeatureMatrix b = apply_sampling(m, {SamplingStrategy::under, seed});
        require(a.review_ids == b.review_ids, "undersample not deterministic");
    }
}

// ---------------------------------------------------------------------------
// 8. cross-validation bookkeeping
// ---------------------------------------------------------------------------
void criterion_cv_bookkeeping() {
    std::mt19937_64 rng(808);
    std::normal_distribution<double> g(0.0, 0.8);
    for (int k : {3, 5, 10}) {
        FeatureMatrix m;
        m.columns = {"x0", "x1"};
        m.n_dense = 2;
        std::uniform_int_distribution<int> nf(25, 60), nn(25, 60);
        int fake_n = nf(rng), non_n = nn(rng);
        for (int i = 0; i < fake_n + non_n; ++i) {
            bool fake = i < fake_n;
            m.rows.push_back({(fake ? 1.0 : -1.0) + g(rng), g(rng)});
            m.labels.push_back(fake ? Label::fake : Label::non_fake);
            m.review_ids.push_back("v" + std::to_string(i));
        }
        TrainParams tp;
        tp.forest.n_trees = 8;
        tp.forest.seed = 2;
        SamplingPlan none{SamplingStrategy::none, 0};
        CvReport r = cross_validate(m, ClassifierKind::forest, tp, none, k,
                                    static_cast<std::uint64_t>(100 + k));

        std::vector<int> seen(m.rows.size(), 0);
        std::vector<long> fake_per(static_cast<size_t>(k)), non_per(static_cast<size_t>(k));
        for (size_t f = 0; f < r.fold_test_rows.size(); ++f) {
            require(r.folds[f].confusion.total() ==
                        static_cast<long>(r.fold_test_rows[f].size()),
                    "fold confusion size mismatch");
            for (size_t i : r.fold_test_rows[f]) {
                seen[i]++;
                (m.labels[i] == Label::fake ? fake_per : non_per)[f]++;
            }
        }
        for (int c : seen) require(c == 1, "a row was tested " + std::to_string(c) + " times");
        auto spread = [](const std::vector<long>& v) {
            auto [lo, hi] = std::minmax_element(v.begin(), v.end());
            return *hi - *lo;
        };
        require(spread(fake_per) <= 1, "fake stratification off by more than one");
        require(spread(non_per) <= 1, "non-fake stratification off by more than one");

        double sp = 0, sr = 0, sf = 0, sa = 0;
        for (const auto& fr : r.folds) {
            sp += fr.metrics.precision;
            sr += fr.metrics.recall;
            sf += fr.metrics.f1;
            sa += fr.metrics.accuracy;
        }
        require_close(r.averaged.precision, sp / k, 1e-12, "averaged precision");
        require_close(r.averaged.recall, sr / k, 1e-12, "averaged recall");
        require_close(r.averaged.f1, sf / k, 1e-12, "averaged f1");
        require_close(r.averaged.accuracy, sa / k, 1e-12, "averaged accuracy");
    }
}

// ---------------------------------------------------------------------------
// 9. rerunning a manifest reproduces the reports byte for byte
// ---------------------------------------------------------------------------
void criterion_rerun_determinism() {
    auto dir = fresh_dir("rerun");
    RunConfig cfg;
    SynthConfig sc;
    sc.n_reviews = 300;
    sc.n_reviewers = 220;
    sc.n_businesses = 10;
    sc.rating_deviation_magnitude = 1.5;
    sc.duplicate_text_rate = 0.4;
    sc.seed = 12;
    cfg.synth = sc;
    cfg.feature_sets = {"FS1", "FS2"};
    cfg.schemes = {"NNC"};
    cfg.classifiers = {"rf"};
    cfg.k_folds = 5;
    cfg.seed = 6;
    cfg.train.forest.n_trees = 12;
    cfg.out_dir = (dir / "a").string();
    std::ostringstream sink;
    require(cmd_evaluate(cfg, sink) == 0, "first evaluate failed");

    RunConfig rerun = load_run_config((dir / "a" / "run-manifest.json").string());
    rerun.out_dir = (dir / "b").string();
    std::ostringstream sink2;
    require(cmd_evaluate(rerun, sink2) == 0, "second evaluate failed");

    require(slurp_path(dir / "a" / "results.csv") == slurp_path(dir / "b" / "results.csv"),
            "results.csv differs between runs");
    require(slurp_path(dir / "a" / "importance.csv") == slurp_path(dir / "b" / "importance.csv"),
            "importance.csv differs between runs");
}

// ---------------------------------------------------------------------------
// 10. the scheme-by-classifier grid runs end to end with sane metrics
// ---------------------------------------------------------------------------
void criterion_scheme_grid() {
    auto started = std::chrono::steady_clock::now();
    auto dir = fresh_dir("grid");
    RunConfig cfg;
    SynthConfig sc;
    sc.n_reviews = 300;
    sc.n_reviewers = 220;
    sc.n_businesses = 10;
    sc.rating_deviation_magnitude = 1.5;
    sc.duplicate_text_rate = 0.5;
    sc.seed = 14;
    cfg.synth = sc;
    cfg.feature_sets = {"FS2"};
    cfg.schemes = {"NNC", "LTC", "BM25"};
    cfg.classifiers = {"rf", "svm", "tree"};
    cfg.k_folds = 5;
    cfg.seed = 2;
    cfg.train.forest.n_trees = 15;
    cfg.out_dir = (dir / "out").string();
    std::ostringstream sink;
    require(cmd_evaluate(cfg, sink) == 0, "evaluate failed");

    auto lines = csv_lines(slurp_path(dir / "out" / "results.csv"));
    require(lines.size() == 10, "expected 9 result rows, saw " + std::to_string(lines.size() - 1));
    std::map<std::string, std::set<std::string>> schemes_by_classifier;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::string cls, fset, scheme, field;
        std::getline(row, cls, ',');
        std::getline(row, fset, ',');
        std::getline(row, scheme, ',');
        schemes_by_classifier[cls].insert(scheme);
        while (std::getline(row, field, ',')) {
            double v = std::stod(field);
            require(v >= 0.0 && v <= 100.0, "metric out of range: " + field);
        }
    }
    require(schemes_by_classifier.size() == 3, "expected 3 classifiers in the grid");
    for (const auto& [cls, schemes] : schemes_by_classifier)
        require(schemes == std::set<std::string>{"BM25", "LTC", "NNC"},
                cls + " is missing a scheme row");
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();
    require(elapsed < 180.0, "over the 3-minute budget: " + std::to_string(elapsed) + "s");
}

struct Criterion {
    int number;
    const char* summary;
    void (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "formula implementations match independent oracles", criterion_formulas},
        {2, "content similarity equals brute-force enumeration", criterion_rcs_brute_force},
        {3, "forest importance scores sum to 100", criterion_importance_sums},
        {4, "reviewer deviation (FS2 over FS1) improves accuracy", criterion_fs2_over_fs1},
        {5, "importance ranking follows the planted signal", criterion_importance_ranking},
        {6, "classifier sanity and shared-fold comparison", criterion_classifier_sanity},
        {7, "sampling rebalances without corrupting rows", criterion_sampling},
        {8, "cross-validation bookkeeping is exact", criterion_cv_bookkeeping},
        {9, "manifest reruns are byte-identical", criterion_rerun_determinism},
        {10, "scheme-by-classifier grid emits sane metrics", criterion_scheme_grid},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto started = std::chrono::steady_clock::now();
        try {
            c.run();
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            std::printf("PASS %2d  %s (%.1fs)\n", c.number, c.summary, secs);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL %2d  %s — %s\n", c.number, c.summary, e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("all %zu criteria passed\n", std::size(criteria));
    else
        std::printf("%d criteria FAILED\n", failures);
    return failures;
}
