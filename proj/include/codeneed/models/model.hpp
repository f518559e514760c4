#pragma once
// One train/predict surface over the six classifiers, plus model persistence.
// Distance/margin/gradient methods (KNN, LSVM, MLP) see standardized inputs;
// tree and Bayes methods (RF, GBSTUMP, GNB) see raw counts. Model files are a
// versioned JSON container; loading a saved model reproduces its predictions
// bit for bit.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "codeneed/errors.hpp"
#include "codeneed/features.hpp"
#include "codeneed/models/common.hpp"
#include "codeneed/models/gradient_boost.hpp"
#include "codeneed/models/knn.hpp"
#include "codeneed/models/linear_svm.hpp"
#include "codeneed/models/mlp.hpp"
#include "codeneed/models/naive_bayes.hpp"
#include "codeneed/models/random_forest.hpp"

namespace codeneed::models {

using json = nlohmann::json;

enum class Algorithm { RF, GBSTUMP, MLP, GNB, KNN, LSVM };

inline const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> all = {Algorithm::RF,  Algorithm::GBSTUMP,
                                               Algorithm::MLP, Algorithm::GNB,
                                               Algorithm::KNN, Algorithm::LSVM};
    return all;
}

inline std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::RF: return "rf";
        case Algorithm::GBSTUMP: return "gbstump";
        case Algorithm::MLP: return "mlp";
        case Algorithm::GNB: return "gnb";
        case Algorithm::KNN: return "knn";
        case Algorithm::LSVM: return "lsvm";
    }
    return "rf";
}

inline std::optional<Algorithm> algorithm_from_name(std::string_view name) {
    if (name == "rf") return Algorithm::RF;
    if (name == "gbstump") return Algorithm::GBSTUMP;
    if (name == "mlp") return Algorithm::MLP;
    if (name == "gnb") return Algorithm::GNB;
    if (name == "knn") return Algorithm::KNN;
    if (name == "lsvm") return Algorithm::LSVM;
    return std::nullopt;
}

struct Hyperparams {
    int knn_k = 5;
    double svm_lambda = 1e-4;
    int svm_epochs = 100;
    int rf_trees = 100;
    int rf_mtry = 0; // 0 = sqrt(features)
    bool rf_bootstrap = true;
    int gb_rounds = 200;
    double gb_learning_rate = 0.1;
    int mlp_hidden = 64;
    double mlp_learning_rate = 0.01;
    int mlp_epochs = 300;
};

struct TrainedModel {
    Algorithm algorithm = Algorithm::RF;
    std::uint64_t seed = 0;
    std::string schema_fingerprint;
    Standardizer standardizer;
    std::variant<GnbParams, KnnParams, LsvmParams, ForestParams, GbParams, MlpParams> params;
    std::optional<features::FeatureSchema> schema; // embedded for self-contained predict
};

inline bool uses_standardized_input(Algorithm a) {
    return a == Algorithm::KNN || a == Algorithm::LSVM || a == Algorithm::MLP;
}

inline TrainedModel train(Algorithm algorithm, const Matrix& X, const std::vector<int>& y,
                          std::uint64_t seed, const Hyperparams& hp = {},
                          const std::string& schema_fingerprint = "") {
    check_training_input(X, y);
    TrainedModel m;
    m.algorithm = algorithm;
    m.seed = seed;
    m.schema_fingerprint = schema_fingerprint;
    m.standardizer = Standardizer::fit(X);

    Matrix Xs;
    if (uses_standardized_input(algorithm)) Xs = m.standardizer.apply(X);

    switch (algorithm) {
        case Algorithm::GNB:
            m.params = gnb_fit(X, y);
            break;
        case Algorithm::KNN:
            m.params = knn_fit(Xs, y, hp.knn_k);
            break;
        case Algorithm::LSVM:
            m.params = lsvm_fit(Xs, y, seed, hp.svm_lambda, hp.svm_epochs);
            break;
        case Algorithm::RF:
            m.params = forest_fit(X, y, seed, hp.rf_trees,
                                  static_cast<std::size_t>(hp.rf_mtry), hp.rf_bootstrap);
            break;
        case Algorithm::GBSTUMP:
            m.params = gb_fit(X, y, hp.gb_rounds, hp.gb_learning_rate);
            break;
        case Algorithm::MLP:
            m.params = mlp_fit(Xs, y, seed, hp.mlp_hidden, hp.mlp_learning_rate, hp.mlp_epochs);
            break;
    }
    return m;
}

inline Prediction predict_one(const TrainedModel& m, std::span<const double> raw_row) {
    if (raw_row.size() != m.standardizer.mean.size())
        throw ModelIoError("predict: feature dimension mismatch");
    std::vector<double> buf;
    std::span<const double> x = raw_row;
    if (uses_standardized_input(m.algorithm)) {
        buf.resize(raw_row.size());
        m.standardizer.apply_row(raw_row, buf);
        x = buf;
    }
    switch (m.algorithm) {
        case Algorithm::GNB: return gnb_predict(std::get<GnbParams>(m.params), x);
        case Algorithm::KNN: return knn_predict(std::get<KnnParams>(m.params), x);
        case Algorithm::LSVM: return lsvm_predict(std::get<LsvmParams>(m.params), x);
        case Algorithm::RF: return forest_predict(std::get<ForestParams>(m.params), x);
        case Algorithm::GBSTUMP: return gb_predict(std::get<GbParams>(m.params), x);
        case Algorithm::MLP: return mlp_predict(std::get<MlpParams>(m.params), x);
    }
    return {};
}

inline std::vector<Prediction> predict(const TrainedModel& m, const Matrix& X) {
    std::vector<Prediction> out;
    out.reserve(X.rows);
    for (std::size_t r = 0; r < X.rows; ++r) out.push_back(predict_one(m, X.row(r)));
    return out;
}

namespace io_detail {

inline json params_to_json(const TrainedModel& m) {
    json j;
    switch (m.algorithm) {
        case Algorithm::GNB: {
            const auto& p = std::get<GnbParams>(m.params);
            j["mean_nocode"] = p.mean[0];
            j["mean_code"] = p.mean[1];
            j["var_nocode"] = p.var[0];
            j["var_code"] = p.var[1];
            j["log_prior_nocode"] = p.log_prior[0];
            j["log_prior_code"] = p.log_prior[1];
            break;
        }
        case Algorithm::KNN: {
            const auto& p = std::get<KnnParams>(m.params);
            j["k"] = p.k;
            j["rows"] = p.train.rows;
            j["cols"] = p.train.cols;
            j["train"] = p.train.data;
            j["labels"] = p.labels;
            break;
        }
        case Algorithm::LSVM: {
            const auto& p = std::get<LsvmParams>(m.params);
            j["w"] = p.w;
            j["bias"] = p.bias;
            j["lambda"] = p.lambda;
            j["epochs"] = p.epochs;
            break;
        }
        case Algorithm::RF: {
            const auto& p = std::get<ForestParams>(m.params);
            j["mtry"] = p.mtry;
            j["bootstrap"] = p.bootstrap;
            json trees = json::array();
            for (const auto& tree : p.trees) {
                json nodes = json::array();
                for (const auto& n : tree.nodes)
                    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label});
                trees.push_back(std::move(nodes));
            }
            j["trees"] = std::move(trees);
            break;
        }
        case Algorithm::GBSTUMP: {
            const auto& p = std::get<GbParams>(m.params);
            j["f0"] = p.f0;
            j["learning_rate"] = p.learning_rate;
            json stumps = json::array();
            for (const auto& s : p.stumps) {
                stumps.push_back({s.has_split, s.feature, s.threshold, s.left_value,
                                  s.right_value, s.single_value});
            }
            j["stumps"] = std::move(stumps);
            break;
        }
        case Algorithm::MLP: {
            const auto& p = std::get<MlpParams>(m.params);
            j["hidden"] = p.hidden;
            j["input_dim"] = p.input_dim;
            j["params"] = p.params;
            break;
        }
    }
    return j;
}

inline void params_from_json(TrainedModel& m, const json& j) {
    switch (m.algorithm) {
        case Algorithm::GNB: {
            GnbParams p;
            p.mean[0] = j.at("mean_nocode").get<std::vector<double>>();
            p.mean[1] = j.at("mean_code").get<std::vector<double>>();
            p.var[0] = j.at("var_nocode").get<std::vector<double>>();
            p.var[1] = j.at("var_code").get<std::vector<double>>();
            p.log_prior[0] = j.at("log_prior_nocode").get<double>();
            p.log_prior[1] = j.at("log_prior_code").get<double>();
            m.params = std::move(p);
            break;
        }
        case Algorithm::KNN: {
            KnnParams p;
            p.k = j.at("k").get<int>();
            p.train.rows = j.at("rows").get<std::size_t>();
            p.train.cols = j.at("cols").get<std::size_t>();
            p.train.data = j.at("train").get<std::vector<double>>();
            p.labels = j.at("labels").get<std::vector<int>>();
            if (p.train.data.size() != p.train.rows * p.train.cols ||
                p.labels.size() != p.train.rows)
                throw ModelIoError("model file: inconsistent knn section");
            m.params = std::move(p);
            break;
        }
        case Algorithm::LSVM: {
            LsvmParams p;
            p.w = j.at("w").get<std::vector<double>>();
            p.bias = j.at("bias").get<double>();
            p.lambda = j.at("lambda").get<double>();
            p.epochs = j.at("epochs").get<int>();
            m.params = std::move(p);
            break;
        }
        case Algorithm::RF: {
            ForestParams p;
            p.mtry = j.at("mtry").get<std::size_t>();
            p.bootstrap = j.at("bootstrap").get<bool>();
            for (const auto& tree_j : j.at("trees")) {
                DecisionTree tree;
                for (const auto& n : tree_j) {
                    TreeNode node;
                    node.feature = n.at(0).get<int>();
                    node.threshold = n.at(1).get<double>();
                    node.left = n.at(2).get<std::int32_t>();
                    node.right = n.at(3).get<std::int32_t>();
                    node.label = n.at(4).get<int>();
                    tree.nodes.push_back(node);
                }
                p.trees.push_back(std::move(tree));
            }
            m.params = std::move(p);
            break;
        }
        case Algorithm::GBSTUMP: {
            GbParams p;
            p.f0 = j.at("f0").get<double>();
            p.learning_rate = j.at("learning_rate").get<double>();
            for (const auto& s : j.at("stumps")) {
                Stump stump;
                stump.has_split = s.at(0).get<bool>();
                stump.feature = s.at(1).get<int>();
                stump.threshold = s.at(2).get<double>();
                stump.left_value = s.at(3).get<double>();
                stump.right_value = s.at(4).get<double>();
                stump.single_value = s.at(5).get<double>();
                p.stumps.push_back(stump);
            }
            m.params = std::move(p);
            break;
        }
        case Algorithm::MLP: {
            MlpParams p;
            p.hidden = j.at("hidden").get<int>();
            p.input_dim = j.at("input_dim").get<std::size_t>();
            p.params = j.at("params").get<std::vector<double>>();
            if (p.params.size() != p.size())
                throw ModelIoError("model file: inconsistent mlp section");
            m.params = std::move(p);
            break;
        }
    }
}

} // namespace io_detail

inline json model_to_json(const TrainedModel& m) {
    json j;
    j["format_version"] = 1;
    j["type"] = "codeneed-model";
    j["algorithm"] = algorithm_name(m.algorithm);
    j["seed"] = m.seed;
    j["schema_fingerprint"] = m.schema_fingerprint;
    j["standardizer"] = {{"mean", m.standardizer.mean}, {"stddev", m.standardizer.stddev}};
    j["params"] = io_detail::params_to_json(m);
    if (m.schema) j["schema"] = features::schema_to_json(*m.schema);
    return j;
}

inline TrainedModel model_from_json(const json& j) {
    TrainedModel m;
    auto require = [&](const char* section) -> const json& {
        auto it = j.find(section);
        if (it == j.end())
            throw ModelIoError(std::string("model file: missing section '") + section + "'");
        return *it;
    };
    int version = require("format_version").get<int>();
    if (version != 1)
        throw ModelIoError("model file: unsupported format_version " + std::to_string(version));
    auto alg = algorithm_from_name(require("algorithm").get<std::string>());
    if (!alg) throw ModelIoError("model file: unknown algorithm");
    m.algorithm = *alg;
    m.seed = require("seed").get<std::uint64_t>();
    m.schema_fingerprint = require("schema_fingerprint").get<std::string>();
    const json& std_j = require("standardizer");
    try {
        m.standardizer.mean = std_j.at("mean").get<std::vector<double>>();
        m.standardizer.stddev = std_j.at("stddev").get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ModelIoError("model file: malformed section 'standardizer'");
    }
    try {
        io_detail::params_from_json(m, require("params"));
    } catch (const json::exception& e) {
        throw ModelIoError(std::string("model file: malformed section 'params': ") + e.what());
    }
    if (auto it = j.find("schema"); it != j.end()) {
        m.schema = features::schema_from_json(*it);
        if (m.schema->fingerprint != m.schema_fingerprint)
            throw ModelIoError("model file: embedded schema does not match fingerprint");
    }
    return m;
}

inline void save_model(const TrainedModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelIoError("cannot write model file: " + path);
    out << model_to_json(m).dump(2) << '\n';
    if (!out) throw ModelIoError("failed writing model file: " + path);
}

inline TrainedModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelIoError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ModelIoError("model file is truncated or not valid JSON (" + path + "): " +
                           e.what());
    }
    return model_from_json(j);
}

} // namespace codeneed::models
