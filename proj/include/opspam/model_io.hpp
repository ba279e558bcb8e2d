#pragma once

#include <fstream>

#include <json.hpp>

#include "opspam/evaluation.hpp"

namespace opspam {

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson tree_node_to_json(const TreeNode* n) {
    if (n->is_leaf()) {
        return ojson{{"predict", std::string(label_name(n->prediction))},
                     {"n_fake", n->n_fake},
                     {"n_non_fake", n->n_non_fake}};
    }
    return ojson{{"feature", n->feature},
                 {"threshold", n->threshold},
                 {"left", tree_node_to_json(n->left.get())},
                 {"right", tree_node_to_json(n->right.get())}};
}

inline std::unique_ptr<TreeNode> tree_node_from_json(const nlohmann::json& j) {
    auto n = std::make_unique<TreeNode>();
    if (j.contains("feature")) {
        n->feature = j.at("feature").get<int>();
        n->threshold = j.at("threshold").get<double>();
        n->left = tree_node_from_json(j.at("left"));
        n->right = tree_node_from_json(j.at("right"));
        return n;
    }
    n->n_fake = j.at("n_fake").get<long>();
    n->n_non_fake = j.at("n_non_fake").get<long>();
    n->prediction = j.at("predict").get<std::string>() == "fake" ? Label::fake : Label::non_fake;
    return n;
}

inline ojson tree_params_to_json(const TreeParams& p) {
    return ojson{{"max_depth", p.max_depth},
                 {"min_leaf", p.min_leaf},
                 {"n_candidate_features", p.n_candidate_features}};
}

inline TreeParams tree_params_from_json(const nlohmann::json& j) {
    TreeParams p;
    p.max_depth = j.at("max_depth").get<int>();
    p.min_leaf = j.at("min_leaf").get<int>();
    p.n_candidate_features = j.at("n_candidate_features").get<int>();
    return p;
}

}  // namespace detail

inline nlohmann::ordered_json normalizer_to_json(const Normalizer& z) {
    nlohmann::ordered_json j;
    j["n_dense"] = z.n_dense;
    j["lo"] = z.lo;
    j["hi"] = z.hi;
    std::vector<int> cflags(z.constant.begin(), z.constant.end());
    j["constant"] = cflags;
    return j;
}

inline Normalizer normalizer_from_json(const nlohmann::json& j) {
    Normalizer z;
    z.n_dense = j.at("n_dense").get<size_t>();
    z.lo = j.at("lo").get<std::vector<double>>();
    z.hi = j.at("hi").get<std::vector<double>>();
    auto cflags = j.at("constant").get<std::vector<int>>();
    z.constant.assign(cflags.begin(), cflags.end());
    return z;
}

// Self-describing model JSON, versioned with a format tag. The optional
// normalizer records how inputs must be scaled before prediction.
inline nlohmann::ordered_json model_to_json(const TrainedModel& m,
                                            const Normalizer* normalizer = nullptr) {
    using detail::ojson;
    ojson j;
    j["format"] = "opspam.model/1";
    j["kind"] = std::string(classifier_name(m.kind));
    switch (m.kind) {
        case ClassifierKind::tree:
            j["columns"] = m.tree.columns;
            j["params"] = ojson{{"tree", detail::tree_params_to_json(m.tree.params)}};
            j["root"] = detail::tree_node_to_json(m.tree.root.get());
            break;
        case ClassifierKind::forest: {
            j["columns"] = m.forest.columns;
            j["params"] = ojson{{"tree", detail::tree_params_to_json(m.forest.tree_params)},
                                {"forest",
                                 ojson{{"n_trees", m.forest.params.n_trees},
                                       {"bootstrap", m.forest.params.bootstrap},
                                       {"seed", m.forest.params.seed}}}};
            ojson importance = ojson::array();
            for (const auto& [name, score] : forest_importance(m.forest))
                importance.push_back(ojson{{"feature", name}, {"score", score}});
            j["importance"] = std::move(importance);
            ojson trees = ojson::array();
            for (const auto& t : m.forest.trees) trees.push_back(detail::tree_node_to_json(t.get()));
            j["trees"] = std::move(trees);
            break;
        }
        case ClassifierKind::svm:
            j["columns"] = m.svm.columns;
            j["params"] = ojson{{"svm",
                                 ojson{{"C", m.svm.params.C},
                                       {"epochs", m.svm.params.epochs},
                                       {"seed", m.svm.params.seed},
                                       {"schedule", "1/(lambda*t)"}}}};
            j["w"] = m.svm.w;
            j["b"] = m.svm.b;
            j["objective"] = m.svm.objective;
            break;
    }
    if (normalizer) j["normalizer"] = normalizer_to_json(*normalizer);
    return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j, Normalizer* normalizer = nullptr) {
    if (j.value("format", "") != std::string("opspam.model/1"))
        throw ValidationError("model file: unknown or missing format tag");
    TrainedModel m;
    std::string kind = j.at("kind").get<std::string>();
    auto k = parse_classifier(kind);
    if (!k) throw ValidationError("model file: unknown kind '" + kind + "'");
    m.kind = *k;
    switch (m.kind) {
        case ClassifierKind::tree:
            m.tree.columns = j.at("columns").get<std::vector<std::string>>();
            m.tree.params = detail::tree_params_from_json(j.at("params").at("tree"));
            m.tree.root = detail::tree_node_from_json(j.at("root"));
            break;
        case ClassifierKind::forest: {
            m.forest.columns = j.at("columns").get<std::vector<std::string>>();
            m.forest.tree_params = detail::tree_params_from_json(j.at("params").at("tree"));
            const auto& fj = j.at("params").at("forest");
            m.forest.params.n_trees = fj.at("n_trees").get<int>();
            m.forest.params.bootstrap = fj.at("bootstrap").get<bool>();
            m.forest.params.seed = fj.at("seed").get<std::uint64_t>();
            for (const auto& t : j.at("trees"))
                m.forest.trees.push_back(detail::tree_node_from_json(t));
            // raw importance is not persisted; keep ranked scores reachable via
            // the saved document, but mark width for prediction checks
            m.forest.importance_raw.assign(m.forest.columns.size(), 0.0);
            for (const auto& e : j.at("importance")) {
                for (size_t c = 0; c < m.forest.columns.size(); ++c)
                    if (m.forest.columns[c] == e.at("feature").get<std::string>())
                        m.forest.importance_raw[c] = e.at("score").get<double>();
            }
            break;
        }
        case ClassifierKind::svm:
            m.svm.columns = j.at("columns").get<std::vector<std::string>>();
            m.svm.w = j.at("w").get<std::vector<double>>();
            m.svm.b = j.at("b").get<double>();
            const auto& sj = j.at("params").at("svm");
            m.svm.params.C = sj.at("C").get<double>();
            m.svm.params.epochs = sj.at("epochs").get<int>();
            m.svm.params.seed = sj.at("seed").get<std::uint64_t>();
            if (j.contains("objective")) m.svm.objective = j.at("objective").get<double>();
            break;
    }
    if (normalizer && j.contains("normalizer")) *normalizer = normalizer_from_json(j.at("normalizer"));
    return m;
}

inline void save_model(const TrainedModel& m, const std::string& path,
                       const Normalizer* normalizer = nullptr) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << model_to_json(m, normalizer).dump(2) << "\n";
}

inline TrainedModel load_model(const std::string& path, Normalizer* normalizer = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ValidationError("model file: invalid JSON");
    return model_from_json(j, normalizer);
}

}  // namespace opspam
