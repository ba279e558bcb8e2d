#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "opspam/corpus_io.hpp"
#include "opspam/model_io.hpp"
#include "opspam/synth.hpp"

namespace opspam {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config (de)serialization.
// ---------------------------------------------------------------------------

inline ojson synth_config_to_json(const SynthConfig& c) {
    return ojson{{"n_reviewers", c.n_reviewers},
                 {"n_businesses", c.n_businesses},
                 {"n_reviews", c.n_reviews},
                 {"fake_fraction", c.fake_fraction},
                 {"duplicate_text_rate", c.duplicate_text_rate},
                 {"burst_rate", c.burst_rate},
                 {"rating_deviation_magnitude", c.rating_deviation_magnitude},
                 {"positive_skew", c.positive_skew},
                 {"vote_suppression", c.vote_suppression},
                 {"repeat_reviewer_rate", c.repeat_reviewer_rate},
                 {"kind", std::string(business_kind_name(c.kind))},
                 {"seed", c.seed}};
}

inline SynthConfig synth_config_from_json(const nlohmann::json& j) {
    SynthConfig c;
    c.n_reviewers = j.value("n_reviewers", c.n_reviewers);
    c.n_businesses = j.value("n_businesses", c.n_businesses);
    c.n_reviews = j.value("n_reviews", c.n_reviews);
    c.fake_fraction = j.value("fake_fraction", c.fake_fraction);
    c.duplicate_text_rate = j.value("duplicate_text_rate", c.duplicate_text_rate);
    c.burst_rate = j.value("burst_rate", c.burst_rate);
    c.rating_deviation_magnitude = j.value("rating_deviation_magnitude", c.rating_deviation_magnitude);
    c.positive_skew = j.value("positive_skew", c.positive_skew);
    c.vote_suppression = j.value("vote_suppression", c.vote_suppression);
    c.repeat_reviewer_rate = j.value("repeat_reviewer_rate", c.repeat_reviewer_rate);
    if (j.contains("kind")) {
        auto k = parse_business_kind(j.at("kind").get<std::string>());
        if (!k) throw ValidationError("synth config: unknown kind");
        c.kind = *k;
    }
    c.seed = j.value("seed", c.seed);
    return c;
}

// Everything a run needs, flags and config file feeding the same fields.
struct RunConfig {
    std::string corpus_path;             // directory; empty means synthetic source
    std::string corpus_format = "auto";  // jsonl | csv | auto
    bool lenient = false;
    std::optional<SynthConfig> synth;

    std::vector<std::string> feature_sets = {"FS2"};
    std::vector<std::string> schemes = {"LTC"};
    std::vector<std::string> classifiers = {"rf"};
    double bm25_k = 1.2;
    long unigram_vocab = 2000;

    int k_folds = 10;
    std::uint64_t seed = 1;
    std::string sampling = "none";
    std::optional<std::uint64_t> sampling_seed;
    bool global_normalize = false;
    bool pool_folds = false;  // report pooled-confusion metrics instead of fold means
    std::string label_policy = "yr=fake,nr=non_fake";
    std::optional<std::string> ref_date;
    std::string vote_source = "reviewer";  // reviewer | review
    bool lemmatize = true;
    bool remove_stopwords = false;

    TrainParams train;
    std::string out_dir = "out";
};

inline ojson run_config_to_json(const RunConfig& c) {
    ojson j;
    j["corpus_path"] = c.corpus_path;
    j["corpus_format"] = c.corpus_format;
    j["lenient"] = c.lenient;
    j["synth"] = c.synth ? synth_config_to_json(*c.synth) : ojson(nullptr);
    j["feature_sets"] = c.feature_sets;
    j["schemes"] = c.schemes;
    j["classifiers"] = c.classifiers;
    j["bm25_k"] = c.bm25_k;
    j["unigram_vocab"] = c.unigram_vocab;
    j["k_folds"] = c.k_folds;
    j["seed"] = c.seed;
    j["sampling"] = c.sampling;
    j["sampling_seed"] = c.sampling_seed ? ojson(*c.sampling_seed) : ojson(nullptr);
    j["global_normalize"] = c.global_normalize;
    j["pool_folds"] = c.pool_folds;
    j["label_policy"] = c.label_policy;
    j["ref_date"] = c.ref_date ? ojson(*c.ref_date) : ojson(nullptr);
    j["vote_source"] = c.vote_source;
    j["lemmatize"] = c.lemmatize;
    j["remove_stopwords"] = c.remove_stopwords;
    j["train"] = ojson{{"tree",
                        ojson{{"max_depth", c.train.tree.max_depth},
                              {"min_leaf", c.train.tree.min_leaf},
                              {"n_candidate_features", c.train.tree.n_candidate_features}}},
                       {"forest",
                        ojson{{"n_trees", c.train.forest.n_trees},
                              {"bootstrap", c.train.forest.bootstrap},
                              {"seed", c.train.forest.seed}}},
                       {"svm",
                        ojson{{"C", c.train.svm.C},
                              {"epochs", c.train.svm.epochs},
                              {"seed", c.train.svm.seed}}}};
    j["out_dir"] = c.out_dir;
    return j;
}

// Accepts either a bare config object or a run manifest wrapping one.
inline RunConfig run_config_from_json(const nlohmann::json& doc) {
    const nlohmann::json& j = doc.contains("run_config") ? doc.at("run_config") : doc;
    RunConfig c;
    c.corpus_path = j.value("corpus_path", c.corpus_path);
    c.corpus_format = j.value("corpus_format", c.corpus_format);
    c.lenient = j.value("lenient", c.lenient);
    if (j.contains("synth") && !j.at("synth").is_null())
        c.synth = synth_config_from_json(j.at("synth"));
    c.feature_sets = j.value("feature_sets", c.feature_sets);
    c.schemes = j.value("schemes", c.schemes);
    c.classifiers = j.value("classifiers", c.classifiers);
    c.bm25_k = j.value("bm25_k", c.bm25_k);
    c.unigram_vocab = j.value("unigram_vocab", c.unigram_vocab);
    c.k_folds = j.value("k_folds", c.k_folds);
    c.seed = j.value("seed", c.seed);
    c.sampling = j.value("sampling", c.sampling);
    if (j.contains("sampling_seed") && !j.at("sampling_seed").is_null())
        c.sampling_seed = j.at("sampling_seed").get<std::uint64_t>();
    c.global_normalize = j.value("global_normalize", c.global_normalize);
    c.pool_folds = j.value("pool_folds", c.pool_folds);
    c.label_policy = j.value("label_policy", c.label_policy);
    if (j.contains("ref_date") && !j.at("ref_date").is_null())
        c.ref_date = j.at("ref_date").get<std::string>();
    c.vote_source = j.value("vote_source", c.vote_source);
    c.lemmatize = j.value("lemmatize", c.lemmatize);
    c.remove_stopwords = j.value("remove_stopwords", c.remove_stopwords);
    if (j.contains("train")) {
        const auto& t = j.at("train");
        if (t.contains("tree")) {
            c.train.tree.max_depth = t.at("tree").value("max_depth", c.train.tree.max_depth);
            c.train.tree.min_leaf = t.at("tree").value("min_leaf", c.train.tree.min_leaf);
            c.train.tree.n_candidate_features =
                t.at("tree").value("n_candidate_features", c.train.tree.n_candidate_features);
        }
        if (t.contains("forest")) {
            c.train.forest.n_trees = t.at("forest").value("n_trees", c.train.forest.n_trees);
            c.train.forest.bootstrap = t.at("forest").value("bootstrap", c.train.forest.bootstrap);
            c.train.forest.seed = t.at("forest").value("seed", c.train.forest.seed);
        }
        if (t.contains("svm")) {
            c.train.svm.C = t.at("svm").value("C", c.train.svm.C);
            c.train.svm.epochs = t.at("svm").value("epochs", c.train.svm.epochs);
            c.train.svm.seed = t.at("svm").value("seed", c.train.svm.seed);
        }
    }
    c.out_dir = j.value("out_dir", c.out_dir);
    return c;
}

inline RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ValidationError("config " + path + ": invalid JSON");
    return run_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Resolution: parse every symbolic field once, derive concrete seeds.
// ---------------------------------------------------------------------------

inline LabelPolicy parse_label_policy(std::string_view text) {
    LabelPolicy p;
    std::string s = lower_ascii(trim(text));
    if (s.empty()) return p;
    size_t start = 0;
    while (start <= s.size()) {
        size_t end = s.find(',', start);
        std::string_view part = trim(std::string_view(s).substr(
            start, end == std::string::npos ? std::string::npos : end - start));
        start = end == std::string::npos ? s.size() + 1 : end + 1;
        if (part.empty()) continue;
        size_t eq = part.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("label policy: expected yr=<class>,nr=<class>");
        std::string_view key = trim(part.substr(0, eq));
        std::string_view val = trim(part.substr(eq + 1));
        Label lab;
        if (val == "fake")
            lab = Label::fake;
        else if (val == "non_fake" || val == "nonfake" || val == "non-fake")
            lab = Label::non_fake;
        else
            throw ValidationError("label policy: unknown class '" + std::string(val) + "'");
        if (key == "yr")
            p.yr = lab;
        else if (key == "nr")
            p.nr = lab;
        else
            throw ValidationError("label policy: unknown flag '" + std::string(key) + "'");
    }
    return p;
}

// "custom:content_length+positive_ratio" builds an ad-hoc ordered set.
inline FeatureSetSpec parse_feature_set(std::string_view name, long unigram_vocab) {
    constexpr std::string_view prefix = "custom:";
    std::string_view t = trim(name);
    if (lower_ascii(t.substr(0, prefix.size())) == prefix) {
        std::vector<FeatureId> cols;
        std::string_view body = t.substr(prefix.size());
        size_t start = 0;
        while (start <= body.size()) {
            size_t end = body.find('+', start);
            std::string_view part = trim(body.substr(
                start, end == std::string_view::npos ? std::string_view::npos : end - start));
            start = end == std::string_view::npos ? body.size() + 1 : end + 1;
            if (part.empty()) continue;
            auto f = parse_feature_id(part);
            if (!f) throw ValidationError("unknown feature '" + std::string(part) + "'");
            cols.push_back(*f);
        }
        if (cols.empty()) throw ValidationError("custom feature set is empty");
        return FeatureSetSpec::custom(std::string(t), std::move(cols));
    }
    return FeatureSetSpec::named(t, static_cast<size_t>(std::max(0L, unigram_vocab)));
}

struct RunPlan {
    RunConfig cfg;  // resolved: all seeds concrete
    std::uint64_t fold_seed = 0;
    SamplingPlan sampling;
    NormalizationMode norm = NormalizationMode::per_fold;
    FeatureBuildOptions build;
    std::vector<FeatureSetSpec> feature_specs;
    std::vector<WeightingScheme> scheme_list;
    std::vector<ClassifierKind> classifier_list;
};

inline RunPlan resolve_run(RunConfig cfg) {
    RunPlan plan;
    if (cfg.k_folds < 2) throw ValidationError("k_folds must be >= 2");
    if (!(cfg.bm25_k > 0)) throw ValidationError("bm25_k must be positive");
    if (cfg.feature_sets.empty()) throw ValidationError("no feature sets given");
    if (cfg.schemes.empty()) throw ValidationError("no weighting schemes given");
    if (cfg.classifiers.empty()) throw ValidationError("no classifiers given");
    if (cfg.corpus_path.empty() && !cfg.synth)
        throw ValidationError("no corpus source: give a corpus path or a synth config");

    for (const std::string& fs : cfg.feature_sets)
        plan.feature_specs.push_back(parse_feature_set(fs, cfg.unigram_vocab));
    for (const std::string& s : cfg.schemes) {
        auto w = parse_weighting(s);
        if (!w) throw ValidationError("unknown weighting scheme '" + s + "'");
        plan.scheme_list.push_back(WeightingScheme{*w, cfg.bm25_k});
    }
    for (const std::string& c : cfg.classifiers) {
        auto k = parse_classifier(c);
        if (!k) throw ValidationError("unknown classifier '" + c + "' (expected rf, svm or tree)");
        plan.classifier_list.push_back(*k);
    }

    auto strat = parse_sampling(cfg.sampling);
    if (!strat) throw ValidationError("unknown sampling strategy '" + cfg.sampling + "'");
    if (!cfg.sampling_seed) cfg.sampling_seed = mix_seed(cfg.seed, 2);
    plan.sampling = {*strat, *cfg.sampling_seed};
    plan.fold_seed = mix_seed(cfg.seed, 1);
    if (cfg.train.forest.seed == 0) cfg.train.forest.seed = mix_seed(cfg.seed, 3);
    if (cfg.train.svm.seed == 0) cfg.train.svm.seed = mix_seed(cfg.seed, 4);
    plan.norm = cfg.global_normalize ? NormalizationMode::global : NormalizationMode::per_fold;

    plan.build.policy = parse_label_policy(cfg.label_policy);
    if (cfg.ref_date) {
        auto d = parse_date(*cfg.ref_date);
        if (!d) throw ValidationError("unparseable ref_date '" + *cfg.ref_date + "'");
        plan.build.ref_date = *d;
    }
    std::string vs = lower_ascii(trim(cfg.vote_source));
    if (vs == "reviewer")
        plan.build.vote_source = VoteSource::reviewer_profile;
    else if (vs == "review")
        plan.build.vote_source = VoteSource::review;
    else
        throw ValidationError("vote_source must be 'reviewer' or 'review'");
    plan.build.text = TextOptions{cfg.lemmatize, cfg.remove_stopwords};

    if (cfg.synth) cfg.synth->validate();
    plan.cfg = std::move(cfg);
    return plan;
}

inline ReviewCorpus load_run_corpus(const RunPlan& plan) {
    if (!plan.cfg.corpus_path.empty()) {
        auto fmt = parse_corpus_format(plan.cfg.corpus_format);
        if (!fmt) throw ValidationError("unknown corpus format '" + plan.cfg.corpus_format + "'");
        LoadReport report;
        ReviewCorpus c =
            load_corpus(plan.cfg.corpus_path, *fmt, LoadOptions{!plan.cfg.lenient}, &report);
        if (!report.ok())
            std::cerr << "note: skipped " << report.issues.size() << " bad row(s)\n";
        return c;
    }
    return generate_synthetic(*plan.cfg.synth);
}

// ---------------------------------------------------------------------------
// Evaluation cells.
// ---------------------------------------------------------------------------

struct CellResult {
    ClassifierKind classifier;
    std::string feature_set;
    std::string scheme;
    CvReport cv;
    MetricsReport headline;  // averaged (or pooled under pool_folds)
    std::vector<std::pair<std::string, double>> importance;  // rf cells only
};

struct EvalOutcome {
    std::vector<CellResult> cells;
    std::vector<std::vector<std::string>> fold_review_ids;
    std::uint64_t fold_seed = 0;
    int k = 0;
};

// Runs the classifier x feature-set x scheme grid. All cells share the fold
// seed (and therefore the folds), so differences between rows are due to the
// varied dimension alone. Optionally trains and persists a full-data model
// per cell.
inline EvalOutcome run_cells(const RunPlan& plan, const ReviewCorpus& corpus,
                             bool persist_models) {
    namespace fs = std::filesystem;
    EvalOutcome out;
    out.fold_seed = plan.fold_seed;
    out.k = plan.cfg.k_folds;

    struct Prepared {
        FeatureMatrix matrix;
    };
    std::vector<std::vector<Prepared>> prepared(plan.feature_specs.size());
    for (size_t fi = 0; fi < plan.feature_specs.size(); ++fi)
        for (const WeightingScheme& sch : plan.scheme_list)
            prepared[fi].push_back(
                {build_feature_matrix(corpus, plan.feature_specs[fi], sch, plan.build)});

    if (!prepared.empty() && !prepared[0].empty()) {
        const FeatureMatrix& first = prepared[0][0].matrix;
        auto folds = kfold_split(first.labels, plan.cfg.k_folds, plan.fold_seed);
        for (const auto& fold : folds) {
            std::vector<std::string> ids;
            ids.reserve(fold.size());
            for (size_t i : fold) ids.push_back(first.review_ids[i]);
            out.fold_review_ids.push_back(std::move(ids));
        }
    }

    bool first_model = true;
    for (ClassifierKind kind : plan.classifier_list) {
        for (size_t fi = 0; fi < plan.feature_specs.size(); ++fi) {
            for (size_t si = 0; si < plan.scheme_list.size(); ++si) {
                const FeatureMatrix& matrix = prepared[fi][si].matrix;
                CellResult cell;
                cell.classifier = kind;
                cell.feature_set = plan.feature_specs[fi].name;
                cell.scheme = std::string(weighting_name(plan.scheme_list[si].variant));
                cell.cv = cross_validate(matrix, kind, plan.cfg.train, plan.sampling,
                                         plan.cfg.k_folds, plan.fold_seed, plan.norm);
                cell.headline = plan.cfg.pool_folds ? cell.cv.pooled : cell.cv.averaged;

                // Full-data model: normalize over all rows, rebalance, train.
                FeatureMatrix full = matrix;
                Normalizer z = fit_normalizer(full);
                apply_normalizer(full, z);
                if (plan.sampling.strategy != SamplingStrategy::none)
                    full = apply_sampling(full, plan.sampling);
                TrainedModel model =
                    train_model(kind, full.rows, full.labels, full.columns, plan.cfg.train);
                if (kind == ClassifierKind::forest) cell.importance = forest_importance(model.forest);

                if (persist_models) {
                    fs::create_directories(plan.cfg.out_dir);
                    std::string cell_name = std::string(classifier_name(kind)) + "_" +
                                            cell.feature_set + "_" + cell.scheme;
                    for (char& ch : cell_name)
                        if (ch == ':' || ch == '+' || ch == '/') ch = '-';
                    bool multi = plan.classifier_list.size() * plan.feature_specs.size() *
                                     plan.scheme_list.size() >
                                 1;
                    if (first_model) {
                        save_model(model, (fs::path(plan.cfg.out_dir) / "model.json").string(), &z);
                        first_model = false;
                    }
                    if (multi)
                        save_model(model,
                                   (fs::path(plan.cfg.out_dir) / ("model_" + cell_name + ".json"))
                                       .string(),
                                   &z);
                }
                out.cells.push_back(std::move(cell));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report writers.
// ---------------------------------------------------------------------------

inline void write_results_csv(const EvalOutcome& out, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << "Classifier,FeatureSet,WeightingScheme,Precision,Recall,F1,Accuracy\r\n";
    for (const CellResult& c : out.cells) {
        f << classifier_name(c.classifier) << ',' << c.feature_set << ',' << c.scheme << ','
          << format_fixed(c.headline.precision, 6) << ',' << format_fixed(c.headline.recall, 6)
          << ',' << format_fixed(c.headline.f1, 6) << ',' << format_fixed(c.headline.accuracy, 6)
          << "\r\n";
    }
}

inline void write_importance_csv(const EvalOutcome& out, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << "Classifier,FeatureSet,WeightingScheme,Rank,Feature,ImportanceScore\r\n";
    for (const CellResult& c : out.cells) {
        for (size_t r = 0; r < c.importance.size(); ++r) {
            f << classifier_name(c.classifier) << ',' << c.feature_set << ',' << c.scheme << ','
              << (r + 1) << ',' << c.importance[r].first << ','
              << format_fixed(c.importance[r].second, 6) << "\r\n";
        }
    }
}

namespace detail {

inline ojson metrics_to_json(const MetricsReport& m) {
    return ojson{{"precision", m.precision},
                 {"recall", m.recall},
                 {"f1", m.f1},
                 {"accuracy", m.accuracy},
                 {"precision_defined", m.precision_defined},
                 {"recall_defined", m.recall_defined}};
}

inline ojson confusion_to_json(const ConfusionCounts& c) {
    return ojson{{"t_fake", c.t_fake},
                 {"t_non_fake", c.t_non_fake},
                 {"f_fake", c.f_fake},
                 {"f_non_fake", c.f_non_fake}};
}

}  // namespace detail

inline void write_folds_json(const EvalOutcome& out, const std::string& path) {
    ojson j;
    j["format"] = "opspam.folds/1";
    j["k"] = out.k;
    j["fold_seed"] = out.fold_seed;
    j["folds"] = out.fold_review_ids;
    ojson cells = ojson::array();
    for (const CellResult& c : out.cells) {
        ojson cj;
        cj["classifier"] = std::string(classifier_name(c.classifier));
        cj["feature_set"] = c.feature_set;
        cj["scheme"] = c.scheme;
        ojson folds = ojson::array();
        for (const FoldResult& fr : c.cv.folds)
            folds.push_back(ojson{{"confusion", detail::confusion_to_json(fr.confusion)},
                                  {"metrics", detail::metrics_to_json(fr.metrics)}});
        cj["folds"] = std::move(folds);
        cj["averaged"] = detail::metrics_to_json(c.cv.averaged);
        cj["pooled"] = detail::metrics_to_json(c.cv.pooled);
        cj["pooled_confusion"] = detail::confusion_to_json(c.cv.pooled_confusion);
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << j.dump(2) << "\n";
}

inline void write_run_manifest(const RunPlan& plan, const std::string& path) {
    ojson j;
    j["format"] = "opspam.run-manifest/1";
    j["run_config"] = run_config_to_json(plan.cfg);
    j["derived"] = ojson{{"fold_seed", plan.fold_seed}, {"sampling_seed", plan.sampling.seed}};
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << j.dump(2) << "\n";
}

inline std::string render_results_table(const EvalOutcome& out) {
    std::ostringstream os;
    auto row = [&os](std::string_view a, std::string_view b, std::string_view c, std::string_view d,
                     std::string_view e, std::string_view f, std::string_view g) {
        os << std::left << std::setw(6) << a << std::setw(26) << b << std::setw(8) << c
           << std::right << std::setw(11) << d << std::setw(11) << e << std::setw(11) << f
           << std::setw(11) << g << "\n";
    };
    row("Clf", "FeatureSet", "Scheme", "Precision", "Recall", "F1", "Accuracy");
    os << std::string(84, '-') << "\n";
    for (const CellResult& c : out.cells)
        row(classifier_name(c.classifier), c.feature_set, c.scheme,
            format_fixed(c.headline.precision, 3), format_fixed(c.headline.recall, 3),
            format_fixed(c.headline.f1, 3), format_fixed(c.headline.accuracy, 3));
    return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns a process exit code; the CLI maps exceptions.
// ---------------------------------------------------------------------------

inline int cmd_synth(const SynthConfig& cfg, const std::string& out_dir,
                     std::ostream& log = std::cout) {
    namespace fs = std::filesystem;
    ReviewCorpus corpus = generate_synthetic(cfg);
    write_corpus(corpus, out_dir, CorpusFormat::jsonl);

    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char* name : {"reviews.jsonl", "reviewers.jsonl", "businesses.jsonl"})
        h = fnv1a64(detail::slurp(fs::path(out_dir) / name), h);

    auto [fake, non] = corpus.class_counts();
    ojson manifest;
    manifest["format"] = "opspam.synth-manifest/1";
    manifest["config"] = synth_config_to_json(cfg);
    manifest["counts"] = ojson{{"reviews", corpus.reviews().size()},
                               {"reviewers", corpus.reviewers().size()},
                               {"businesses", corpus.businesses().size()},
                               {"fake", fake},
                               {"non_fake", non}};
    manifest["corpus_hash"] = to_hex(h);
    std::ofstream mf(fs::path(out_dir) / "synth-manifest.json", std::ios::binary);
    if (!mf) throw Error("cannot write synth manifest");
    mf << manifest.dump(2) << "\n";

    log << "wrote " << corpus.reviews().size() << " reviews (" << fake << " fake / " << non
        << " non-fake), " << corpus.reviewers().size() << " reviewers, "
        << corpus.businesses().size() << " businesses to " << out_dir << "\n";
    return 0;
}

inline int cmd_featurize(const RunConfig& cfg, std::ostream& log = std::cout) {
    namespace fs = std::filesystem;
    RunPlan plan = resolve_run(cfg);
    ReviewCorpus corpus = load_run_corpus(plan);
    FeatureMatrix m =
        build_feature_matrix(corpus, plan.feature_specs[0], plan.scheme_list[0], plan.build);
    fs::create_directories(plan.cfg.out_dir);
    std::string path = (fs::path(plan.cfg.out_dir) / "features.csv").string();
    write_feature_csv(m, path);
    log << "wrote " << m.rows.size() << " rows x " << m.width() << " features to " << path << "\n";
    return 0;
}

inline int cmd_evaluate(const RunConfig& cfg, std::ostream& log = std::cout) {
    namespace fs = std::filesystem;
    RunPlan plan = resolve_run(cfg);
    ReviewCorpus corpus = load_run_corpus(plan);
    EvalOutcome out = run_cells(plan, corpus, /*persist_models=*/true);

    fs::create_directories(plan.cfg.out_dir);
    write_results_csv(out, (fs::path(plan.cfg.out_dir) / "results.csv").string());
    write_importance_csv(out, (fs::path(plan.cfg.out_dir) / "importance.csv").string());
    write_folds_json(out, (fs::path(plan.cfg.out_dir) / "folds.json").string());
    write_run_manifest(plan, (fs::path(plan.cfg.out_dir) / "run-manifest.json").string());
    log << render_results_table(out);
    return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& log = std::cout) {
    namespace fs = std::filesystem;
    RunPlan plan = resolve_run(cfg);
    size_t n_cells =
        plan.classifier_list.size() * plan.feature_specs.size() * plan.scheme_list.size();
    if (n_cells < 2)
        throw ValidationError("compare needs at least 2 configurations; vary the classifier, "
                              "feature set, or scheme lists");
    ReviewCorpus corpus = load_run_corpus(plan);
    EvalOutcome out = run_cells(plan, corpus, /*persist_models=*/false);
    std::stable_sort(out.cells.begin(), out.cells.end(),
                     [](const CellResult& a, const CellResult& b) {
                         return a.headline.accuracy > b.headline.accuracy;
                     });

    fs::create_directories(plan.cfg.out_dir);
    write_results_csv(out, (fs::path(plan.cfg.out_dir) / "results.csv").string());
    write_importance_csv(out, (fs::path(plan.cfg.out_dir) / "importance.csv").string());
    write_folds_json(out, (fs::path(plan.cfg.out_dir) / "folds.json").string());
    write_run_manifest(plan, (fs::path(plan.cfg.out_dir) / "run-manifest.json").string());
    log << render_results_table(out);
    return 0;
}

}  // namespace opspam
