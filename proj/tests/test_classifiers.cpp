#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <random>

#include <opspam/forest.hpp>
#include <opspam/model_io.hpp>
#include <opspam/svm.hpp>

#include "oracles.hpp"

using namespace opspam;
using Catch::Matchers::WithinAbs;

namespace {

constexpr Label F = Label::fake;
constexpr Label N = Label::non_fake;

// 2-D blobs, separable along the first axis.
void separable(Matrix& X, std::vector<Label>& y) {
    X = {{0.0, 1.0}, {1.0, 0.5}, {2.0, 1.5}, {3.5, 0.2}, {4.0, 1.2}, {5.0, 0.8}};
    y = {N, N, N, F, F, F};
}

// noisy labels over a diagonal boundary, plus a clean holdout
void noisy_fixture(Matrix& train_x, std::vector<Label>& train_y, Matrix& test_x,
                   std::vector<Label>& test_y) {
    std::mt19937_64 rng(424242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        double a = u(rng), b = u(rng);
        Label l = a + b > 1.0 ? F : N;
        if (u(rng) < 0.12) l = l == F ? N : F;  // label noise
        train_x.push_back({a, b});
        train_y.push_back(l);
    }
    for (int i = 0; i < 200; ++i) {
        double a = u(rng), b = u(rng);
        if (std::fabs(a + b - 1.0) < 0.08) continue;  // keep the holdout unambiguous
        test_x.push_back({a, b});
        test_y.push_back(a + b > 1.0 ? F : N);
    }
}

double accuracy_on(const Matrix& X, const std::vector<Label>& y,
                   const std::function<Label(const std::vector<double>&)>& f) {
    double hit = 0;
    for (size_t i = 0; i < X.size(); ++i) hit += f(X[i]) == y[i] ? 1 : 0;
    return hit / static_cast<double>(X.size());
}

}  // namespace

TEST_CASE("gini purity from counts", "[classifiers]") {
    CHECK_THAT(gini_counts(1, 1), WithinAbs(0.5, 1e-15));
    CHECK_THAT(gini_counts(4, 0), WithinAbs(1.0, 1e-15));
    CHECK_THAT(gini_counts(0, 7), WithinAbs(1.0, 1e-15));
    CHECK_THAT(gini_counts(3, 1), WithinAbs(0.625, 1e-15));
    CHECK_THROWS(gini_counts(0, 0));
    CHECK_THAT(gini_node({F, F, N, N}), WithinAbs(0.5, 1e-15));

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> count(0, 50);
    for (int i = 0; i < 200; ++i) {
        long a = count(rng), b = count(rng);
        if (a + b == 0) continue;
        double g = gini_counts(a, b);
        CHECK(g >= 0.5);
        CHECK(g <= 1.0);
        CHECK_THAT(g, WithinAbs(oracle::gini(a, b), 1e-15));
        if (a == 0 || b == 0) CHECK_THAT(g, WithinAbs(1.0, 1e-15));
        if (a != 0 && b != 0) CHECK(g < 1.0);
    }
}

TEST_CASE("best split lands between the classes", "[classifiers]") {
    Matrix X = {{1.0}, {2.0}, {8.0}, {9.0}};
    std::vector<Label> y = {F, F, N, N};
    auto s = best_split(X, y, {0});
    REQUIRE(s);
    CHECK(s->feature == 0);
    CHECK_THAT(s->threshold, WithinAbs(5.0, 1e-15));
    CHECK_THAT(s->weighted_purity, WithinAbs(1.0, 1e-15));
}

TEST_CASE("split ties go to the lowest feature index and threshold", "[classifiers]") {
    // identical informative columns: both give purity 1, index 0 must win
    Matrix X = {{1.0, 1.0}, {2.0, 2.0}, {8.0, 8.0}, {9.0, 9.0}};
    std::vector<Label> y = {F, F, N, N};
    auto s = best_split(X, y, {1, 0});  // order in the call must not matter
    REQUIRE(s);
    CHECK(s->feature == 0);
    // symmetric fixture: thresholds 3 and 11 tie on purity, the lower one wins
    Matrix X2 = {{1.0}, {5.0}, {9.0}, {13.0}};
    std::vector<Label> y2 = {F, N, F, N};
    auto s2 = best_split(X2, y2, {0});
    REQUIRE(s2);
    CHECK_THAT(s2->threshold, WithinAbs(3.0, 1e-15));
    CHECK_THAT(s2->weighted_purity, WithinAbs(0.25 + 0.75 * 5.0 / 9.0, 1e-12));
}

TEST_CASE("split candidates respect the minimum child size", "[classifiers]") {
    Matrix X = {{1.0}, {2.0}, {8.0}, {9.0}};
    std::vector<Label> y = {F, N, N, N};
    auto any = best_split(X, y, {0}, 1);
    REQUIRE(any);
    CHECK_THAT(any->threshold, WithinAbs(1.5, 1e-15));  // isolates the one fake
    auto constrained = best_split(X, y, {0}, 2);
    REQUIRE(constrained);
    CHECK_THAT(constrained->threshold, WithinAbs(5.0, 1e-15));  // 1.5 now illegal
    CHECK_FALSE(best_split(X, y, {0}, 3));  // no split leaves 3 on both sides
}

TEST_CASE("degenerate inputs yield no split", "[classifiers]") {
    Matrix X = {{1.0}, {2.0}};
    CHECK_FALSE(best_split(X, {F, F}, {0}));          // pure
    CHECK_FALSE(best_split({{1.0}}, {F}, {0}));       // one row
    Matrix same = {{3.0}, {3.0}};
    CHECK_FALSE(best_split(same, {F, N}, {0}));       // no boundary
}

TEST_CASE("best split is invariant to row order and monotone rescaling", "[classifiers]") {
    std::mt19937_64 rng(1312);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int iter = 0; iter < 40; ++iter) {
        Matrix X;
        std::vector<Label> y;
        for (int i = 0; i < 20; ++i) {
            X.push_back({u(rng), u(rng), u(rng)});
            y.push_back(coin(rng) ? F : N);
        }
        auto base = best_split(X, y, {0, 1, 2});
        if (!base) continue;

        // permute rows
        std::vector<size_t> perm(X.size());
        for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        Matrix Xp;
        std::vector<Label> yp;
        for (size_t i : perm) {
            Xp.push_back(X[i]);
            yp.push_back(y[i]);
        }
        auto permuted = best_split(Xp, yp, {0, 1, 2});
        REQUIRE(permuted);
        CHECK(permuted->feature == base->feature);
        CHECK_THAT(permuted->threshold, WithinAbs(base->threshold, 1e-12));
        CHECK_THAT(permuted->weighted_purity, WithinAbs(base->weighted_purity, 1e-12));

        // strictly increasing rescale of every feature: x -> 2x + 3
        Matrix Xs = X;
        for (auto& row : Xs)
            for (double& v : row) v = 2.0 * v + 3.0;
        auto scaled = best_split(Xs, y, {0, 1, 2});
        REQUIRE(scaled);
        CHECK(scaled->feature == base->feature);
        CHECK_THAT(scaled->threshold, WithinAbs(2.0 * base->threshold + 3.0, 1e-9));
        CHECK_THAT(scaled->weighted_purity, WithinAbs(base->weighted_purity, 1e-12));
    }
}

TEST_CASE("a tree separates separable data perfectly", "[classifiers]") {
    Matrix X;
    std::vector<Label> y;
    separable(X, y);
    auto root = train_tree(X, y, TreeParams{16, 1, 0});
    for (size_t i = 0; i < X.size(); ++i) CHECK(predict_tree(root.get(), X[i]) == y[i]);
}

TEST_CASE("depth and leaf limits stop growth", "[classifiers]") {
    Matrix X;
    std::vector<Label> y;
    separable(X, y);
    TreeParams stump{0, 1, 0};  // no depth budget at all
    auto leaf = train_tree(X, y, stump);
    CHECK(leaf->is_leaf());
    CHECK(leaf->prediction == N);  // 3-3 tie goes to non_fake

    TreeParams fat_leaves{16, 4, 0};  // 6 rows < 2*min_leaf = 8
    auto leaf2 = train_tree(X, y, fat_leaves);
    CHECK(leaf2->is_leaf());

    TreeParams one_level{1, 1, 0};
    auto shallow = train_tree(X, y, one_level);
    REQUIRE_FALSE(shallow->is_leaf());
    CHECK(shallow->left->is_leaf());
    CHECK(shallow->right->is_leaf());
}

TEST_CASE("tree model checks the row width", "[classifiers]") {
    Matrix X;
    std::vector<Label> y;
    separable(X, y);
    TreeModel m = train_tree_model(X, y, {"a", "b"});
    CHECK(predict_row(m, {4.5, 0.0}) == F);
    CHECK_THROWS(predict_row(m, {1.0}));
    CHECK_THROWS(train_tree(Matrix{}, {}));
}

TEST_CASE("a single-tree forest without bootstrap equals the tree", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    TreeParams tp{16, 2, 0};
    ForestParams fp;
    fp.n_trees = 1;
    fp.bootstrap = false;
    TreeParams all_feats = tp;
    all_feats.n_candidate_features = 2;  // full width disables sampling
    ForestModel forest = train_forest(X, y, {"a", "b"}, all_feats, fp);
    auto tree = train_tree(X, y, tp);
    for (size_t i = 0; i < X.size(); ++i)
        CHECK(predict_row(forest, X[i]) == predict_tree(tree.get(), X[i]));
}

TEST_CASE("forests are bit-reproducible per seed", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    ForestParams fp;
    fp.n_trees = 12;
    fp.seed = 77;
    ForestModel a = train_forest(X, y, {"a", "b"}, {}, fp);
    ForestModel b = train_forest(X, y, {"a", "b"}, {}, fp);
    for (const auto& row : tx) CHECK(predict_row(a, row) == predict_row(b, row));
    REQUIRE(a.importance_raw.size() == b.importance_raw.size());
    for (size_t i = 0; i < a.importance_raw.size(); ++i)
        CHECK(a.importance_raw[i] == b.importance_raw[i]);
}

TEST_CASE("forest beats a single tree on noisy labels", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    auto tree = train_tree(X, y);
    ForestParams fp;
    fp.n_trees = 40;
    fp.seed = 5;
    ForestModel forest = train_forest(X, y, {"a", "b"}, {}, fp);
    double tree_acc =
        accuracy_on(tx, ty, [&](const std::vector<double>& r) { return predict_tree(tree.get(), r); });
    double forest_acc =
        accuracy_on(tx, ty, [&](const std::vector<double>& r) { return predict_row(forest, r); });
    CHECK(forest_acc >= tree_acc);
}

TEST_CASE("importance scores form a ranked percentage table", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    // add a pure-noise third column
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& row : X) row.push_back(u(rng));
    ForestParams fp;
    fp.n_trees = 25;
    fp.seed = 9;
    ForestModel m = train_forest(X, y, {"a", "b", "noise"}, {}, fp);
    auto table = forest_importance(m);
    REQUIRE(table.size() == 3);
    double sum = 0.0;
    for (auto& [name, score] : table) {
        CHECK(score >= 0.0);
        sum += score;
    }
    CHECK_THAT(sum, WithinAbs(100.0, 1e-9));
    CHECK(table[0].second >= table[1].second);
    CHECK(table[1].second >= table[2].second);
    CHECK(table[2].first == "noise");  // the informative pair outranks noise
}

TEST_CASE("duplicated columns share their importance mass stably", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix X2;
    for (auto& row : X) X2.push_back({row[0], row[0], row[1], u(rng)});  // col 0 twice
    auto score_of = [](const std::vector<std::pair<std::string, double>>& t,
                       const std::string& name) {
        for (auto& [n, s] : t)
            if (n == name) return s;
        return 0.0;
    };
    // the split between the two copies is seed-dependent, but their sum is not
    std::vector<double> sums;
    for (std::uint64_t seed : {13u, 14u, 15u, 16u, 17u}) {
        ForestParams fp;
        fp.n_trees = 60;
        fp.seed = seed;
        auto t = forest_importance(train_forest(X2, y, {"a1", "a2", "b", "noise"}, {}, fp));
        sums.push_back(score_of(t, "a1") + score_of(t, "a2"));
    }
    double mean = 0.0;
    for (double s : sums) mean += s;
    mean /= static_cast<double>(sums.size());
    for (double s : sums) CHECK_THAT(s, WithinAbs(mean, 2.0));
}

TEST_CASE("forest guards its inputs", "[classifiers]") {
    CHECK_THROWS(train_forest({}, {}, {}));
    Matrix X = {{1.0}, {2.0}};
    std::vector<Label> y = {F, N};
    ForestParams zero;
    zero.n_trees = 0;
    CHECK_THROWS(train_forest(X, y, {"x"}, {}, zero));
    CHECK_THROWS(train_forest(X, y, {"x", "extra"}, {}, {}));
    ForestModel empty;
    CHECK_THROWS(predict_row(empty, {1.0}));
    CHECK_THROWS(forest_importance(empty));
}

TEST_CASE("svm separates blobs and pins the midpoint", "[classifiers]") {
    Matrix X = {{-1.0, 0.0}, {1.0, 0.0}};
    std::vector<Label> y = {N, F};
    SvmParams p;
    p.C = 10.0;
    p.epochs = 100;
    LinearSvmModel m = train_svm(X, y, {"x0", "x1"}, p);
    CHECK(predict_row(m, X[0]) == N);
    CHECK(predict_row(m, X[1]) == F);
    // decision boundary passes through the midpoint of the two points
    double mid = m.w[0] * 0.0 + m.w[1] * 0.0 - m.b;
    CHECK_THAT(mid, WithinAbs(0.0, 1e-6));

    Matrix X2 = {{2.0, -1.0}, {4.0, 1.0}};
    LinearSvmModel m2 = train_svm(X2, y, {}, p);
    double mid2 = m2.w[0] * 3.0 + m2.w[1] * 0.0 - m2.b;
    CHECK_THAT(mid2, WithinAbs(0.0, 1e-6));
}

TEST_CASE("svm reaches full accuracy on a separable fixture at high C", "[classifiers]") {
    Matrix X = {{0.0, 0.2}, {0.5, 1.0}, {1.0, 0.1}, {3.0, 0.9}, {3.5, 0.0}, {4.0, 1.0}};
    std::vector<Label> y = {N, N, N, F, F, F};
    SvmParams p;
    p.C = 100.0;
    p.epochs = 300;
    LinearSvmModel m = train_svm(X, y, {}, p);
    for (size_t i = 0; i < X.size(); ++i) CHECK(predict_row(m, X[i]) == y[i]);
}

TEST_CASE("svm objective trace never increases", "[classifiers]") {
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    SvmParams p;
    p.epochs = 40;
    LinearSvmModel m = train_svm(X, y, {}, p);
    REQUIRE(m.objective_trace.size() == 41);  // one per epoch plus the final polish
    for (size_t i = 1; i < m.objective_trace.size(); ++i)
        CHECK(m.objective_trace[i] <= m.objective_trace[i - 1] + 1e-12);
    CHECK_THAT(m.objective, WithinAbs(m.objective_trace.back(), 1e-12));
    // objective evaluates correctly at the returned point
    std::vector<int> ypm;
    for (Label l : y) ypm.push_back(l == F ? 1 : -1);
    CHECK_THAT(svm_objective(X, ypm, m.w, m.b, p.C), WithinAbs(m.objective, 1e-9));
}

TEST_CASE("svm decision rule on a hand-built model", "[classifiers]") {
    LinearSvmModel m;
    m.w = {1.0, 0.0};
    m.b = 0.5;
    CHECK(predict_row(m, {2.0, 3.0}) == F);
    CHECK(predict_row(m, {0.0, 9.0}) == N);
    CHECK(predict_row(m, {0.5, 0.0}) == N);  // on the boundary -> non_fake
    CHECK_THAT(decision_value(m, {2.0, 0.0}), WithinAbs(1.5, 1e-15));
    CHECK_THROWS(predict_row(m, {1.0, 2.0, 3.0}));
}

TEST_CASE("svm rejects bad inputs", "[classifiers]") {
    Matrix X = {{1.0}, {2.0}};
    CHECK_THROWS(train_svm({}, {}, {}));
    CHECK_THROWS(train_svm(X, {F, F}, {}));  // single class
    SvmParams bad;
    bad.C = 0.0;
    CHECK_THROWS(train_svm(X, {F, N}, {}, bad));
    SvmParams bad2;
    bad2.epochs = 0;
    CHECK_THROWS(train_svm(X, {F, N}, {}, bad2));
    CHECK_THROWS(train_svm(X, {F, N}, {"a", "b"}));  // width mismatch
}

TEST_CASE("models survive a save/load round trip", "[classifiers]") {
    namespace fs = std::filesystem;
    Matrix X, tx;
    std::vector<Label> y, ty;
    noisy_fixture(X, y, tx, ty);
    auto dir = fs::temp_directory_path() / "opspam-test-models";
    fs::create_directories(dir);

    Normalizer z;
    z.n_dense = 2;
    z.lo = {0.0, -1.0};
    z.hi = {1.0, 3.5};
    z.constant = {0, 0};

    SECTION("tree") {
        TrainedModel m;
        m.kind = ClassifierKind::tree;
        m.tree = train_tree_model(X, y, {"a", "b"});
        save_model(m, (dir / "tree.json").string(), &z);
        Normalizer z2;
        TrainedModel back = load_model((dir / "tree.json").string(), &z2);
        CHECK(back.kind == ClassifierKind::tree);
        for (const auto& row : tx) CHECK(predict_row(back, row) == predict_row(m, row));
        CHECK(z2.lo == z.lo);
        CHECK(z2.hi == z.hi);
    }
    SECTION("forest") {
        TrainedModel m;
        m.kind = ClassifierKind::forest;
        ForestParams fp;
        fp.n_trees = 8;
        fp.seed = 3;
        m.forest = train_forest(X, y, {"a", "b"}, {}, fp);
        save_model(m, (dir / "forest.json").string());
        TrainedModel back = load_model((dir / "forest.json").string());
        CHECK(back.kind == ClassifierKind::forest);
        for (const auto& row : tx) CHECK(predict_row(back, row) == predict_row(m, row));
        auto before = forest_importance(m.forest);
        auto after = forest_importance(back.forest);
        REQUIRE(before.size() == after.size());
        for (size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].first == after[i].first);
            CHECK_THAT(before[i].second, WithinAbs(after[i].second, 1e-9));
        }
    }
    SECTION("svm") {
        TrainedModel m;
        m.kind = ClassifierKind::svm;
        SvmParams sp;
        sp.epochs = 30;
        m.svm = train_svm(X, y, {"a", "b"}, sp);
        save_model(m, (dir / "svm.json").string());
        TrainedModel back = load_model((dir / "svm.json").string());
        CHECK(back.kind == ClassifierKind::svm);
        CHECK(back.svm.b == m.svm.b);
        for (const auto& row : tx) CHECK(predict_row(back, row) == predict_row(m, row));
    }
}

TEST_CASE("model files declare their format", "[classifiers]") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "opspam-test-models";
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "bad.json");
        f << "{\"format\": \"something-else/9\", \"kind\": \"tree\"}";
    }
    CHECK_THROWS_AS(load_model((dir / "bad.json").string()), ValidationError);
    {
        std::ofstream f(dir / "garbage.json");
        f << "not json at all";
    }
    CHECK_THROWS_AS(load_model((dir / "garbage.json").string()), ValidationError);
    CHECK_THROWS(load_model((dir / "missing.json").string()));
}
