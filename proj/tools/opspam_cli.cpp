#include <CLI11.hpp>

#include <opspam/driver.hpp>

namespace {

// --config is honored before flag binding so that explicit flags override
// file values. Scan argv by hand since the file must load first.
std::optional<std::string> find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string_view a = argv[i];
        if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0) return std::string(a.substr(9));
    }
    return std::nullopt;
}

struct SynthFlags {
    opspam::SynthConfig cfg;
    bool enabled = false;
    std::string kind;
    std::vector<CLI::Option*> opts;

    void attach(CLI::App* app, bool with_enable_flag) {
        if (with_enable_flag)
            opts.push_back(app->add_flag("--synth", enabled, "evaluate a generated corpus"));
        opts.push_back(app->add_option("--synth-reviews", cfg.n_reviews, "number of reviews"));
        opts.push_back(
            app->add_option("--synth-reviewers", cfg.n_reviewers, "number of reviewers"));
        opts.push_back(
            app->add_option("--synth-businesses", cfg.n_businesses, "number of businesses"));
        opts.push_back(app->add_option("--synth-fake-fraction", cfg.fake_fraction,
                                       "share of reviews labeled fake"));
        opts.push_back(app->add_option("--synth-duplicate-rate", cfg.duplicate_text_rate,
                                       "spam signal: verbatim self-copied text"));
        opts.push_back(app->add_option("--synth-burst-rate", cfg.burst_rate,
                                       "spam signal: posting-date bursts"));
        opts.push_back(app->add_option("--synth-rating-deviation", cfg.rating_deviation_magnitude,
                                       "spam signal: rating shift away from the business mean"));
        opts.push_back(app->add_option("--synth-positive-skew", cfg.positive_skew,
                                       "spam signal: share of spam pinned to 5 stars"));
        opts.push_back(app->add_option("--synth-vote-suppression", cfg.vote_suppression,
                                       "spam signal: scale-down of spammer vote counts"));
        opts.push_back(app->add_option("--synth-repeat-rate", cfg.repeat_reviewer_rate,
                                       "chance a review reuses an existing reviewer"));
        opts.push_back(app->add_option("--synth-kind", kind, "restaurant or hotel"));
        opts.push_back(app->add_option("--synth-seed", cfg.seed, "generator seed"));
    }

    bool any_given() const {
        for (const CLI::Option* o : opts)
            if (o->count() > 0) return true;
        return false;
    }

    void finish() {
        if (!kind.empty()) {
            auto k = opspam::parse_business_kind(kind);
            if (!k) throw opspam::ValidationError("unknown synth kind '" + kind + "'");
            cfg.kind = *k;
        }
    }
};

struct RunFlags {
    opspam::RunConfig cfg;
    SynthFlags synth;
    std::string config_path;         // recognized; consumed in the pre-scan
    std::uint64_t sampling_seed = 0;
    CLI::Option* sampling_seed_opt = nullptr;
    std::string ref_date;

    void attach(CLI::App* app, bool eval_flags) {
        if (cfg.synth) synth.cfg = *cfg.synth;
        synth.enabled = cfg.synth.has_value();
        app->add_option("--config", config_path, "JSON run config or a prior run manifest");
        app->add_option("--corpus", cfg.corpus_path, "corpus directory");
        app->add_option("--format", cfg.corpus_format, "jsonl, csv or auto")
            ->check(CLI::IsMember({"jsonl", "csv", "auto"}));
        app->add_flag("--lenient", cfg.lenient, "skip bad rows instead of failing");
        synth.attach(app, /*with_enable_flag=*/true);

        app->add_option("--feature-set,--feature-sets", cfg.feature_sets,
                        "FS1..FS5 or custom:<f1>+<f2>+...")
            ->delimiter(',');
        app->add_option("--scheme,--schemes", cfg.schemes, "NNC, LTC or BM25")->delimiter(',');
        app->add_option("--bm25-k", cfg.bm25_k, "BM25 saturation constant");
        app->add_option("--unigram-vocab", cfg.unigram_vocab,
                        "vocabulary size for unigram feature sets");
        app->add_option("--label-policy", cfg.label_policy,
                        "class for recommended flags, e.g. yr=fake,nr=non_fake");
        app->add_option("--ref-date", ref_date, "membership-length reference date");
        app->add_option("--vote-source", cfg.vote_source,
                        "useful/cool/funny from 'reviewer' profile or per 'review'")
            ->check(CLI::IsMember({"reviewer", "review"}));
        app->add_flag("--lemmatize,!--no-lemmatize", cfg.lemmatize,
                      "reduce tokens to dictionary form before weighting");
        app->add_flag("--remove-stopwords", cfg.remove_stopwords,
                      "drop common function words before weighting");
        app->add_option("--out", cfg.out_dir, "output directory");

        if (!eval_flags) return;
        app->add_option("--classifier,--classifiers", cfg.classifiers, "rf, svm or tree")
            ->delimiter(',');
        app->add_option("--k-folds", cfg.k_folds, "cross-validation folds");
        app->add_option("--seed", cfg.seed, "master seed for folds and training");
        app->add_option("--sampling", cfg.sampling, "none, under or over")
            ->check(CLI::IsMember({"none", "under", "over"}));
        sampling_seed_opt =
            app->add_option("--sampling-seed", sampling_seed, "seed for the rebalancing draw");
        app->add_flag("--global-normalize", cfg.global_normalize,
                      "fit min-max bounds once on the full matrix");
        app->add_flag("--pool-folds", cfg.pool_folds,
                      "report metrics of the pooled confusion instead of fold means");
        app->add_option("--trees", cfg.train.forest.n_trees, "forest size");
        app->add_option("--max-depth", cfg.train.tree.max_depth, "tree depth limit");
        app->add_option("--min-leaf", cfg.train.tree.min_leaf, "minimum samples per leaf");
        app->add_option("--candidate-features", cfg.train.tree.n_candidate_features,
                        "features tried per split (0 = sqrt of width)");
        app->add_option("--svm-c", cfg.train.svm.C, "hinge-loss weight");
        app->add_option("--svm-epochs", cfg.train.svm.epochs, "SVM passes over the data");
    }

    opspam::RunConfig finish() {
        synth.finish();
        if (synth.enabled || synth.any_given()) cfg.synth = synth.cfg;
        if (sampling_seed_opt && sampling_seed_opt->count() > 0) cfg.sampling_seed = sampling_seed;
        if (!ref_date.empty()) cfg.ref_date = ref_date;
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"opinion-spam detection: corpus synthesis, features, classifiers, reports"};
    app.require_subcommand(1);

    opspam::RunConfig base;
    if (auto cfg_path = find_config_arg(argc, argv)) {
        try {
            base = opspam::load_run_config(*cfg_path);
        } catch (const opspam::ValidationError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }

    int rc = 0;

    auto* synth_cmd = app.add_subcommand("synth", "generate a labeled corpus");
    auto synth_flags = std::make_shared<SynthFlags>();
    auto synth_out = std::make_shared<std::string>("out");
    auto synth_cfg_sink = std::make_shared<std::string>();
    if (base.synth) synth_flags->cfg = *base.synth;
    synth_flags->attach(synth_cmd, /*with_enable_flag=*/false);
    synth_cmd->add_option("--config", *synth_cfg_sink, "JSON config with a synth block");
    synth_cmd->add_option("--out", *synth_out, "output directory");
    synth_cmd->callback([synth_flags, synth_out, synth_cfg_sink, &rc] {
        synth_flags->finish();
        rc = opspam::cmd_synth(synth_flags->cfg, *synth_out);
    });

    auto* feat_cmd = app.add_subcommand("featurize", "write the feature matrix as CSV");
    auto feat_flags = std::make_shared<RunFlags>();
    feat_flags->cfg = base;
    feat_flags->attach(feat_cmd, /*eval_flags=*/false);
    feat_cmd->callback([feat_flags, &rc] { rc = opspam::cmd_featurize(feat_flags->finish()); });

    auto* eval_cmd = app.add_subcommand("evaluate", "cross-validate classifiers and report");
    auto eval_flags = std::make_shared<RunFlags>();
    eval_flags->cfg = base;
    eval_flags->attach(eval_cmd, /*eval_flags=*/true);
    eval_cmd->callback([eval_flags, &rc] { rc = opspam::cmd_evaluate(eval_flags->finish()); });

    auto* cmp_cmd = app.add_subcommand("compare", "rank several configurations on shared folds");
    auto cmp_flags = std::make_shared<RunFlags>();
    cmp_flags->cfg = base;
    cmp_flags->attach(cmp_cmd, /*eval_flags=*/true);
    cmp_cmd->callback([cmp_flags, &rc] { rc = opspam::cmd_compare(cmp_flags->finish()); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const opspam::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
