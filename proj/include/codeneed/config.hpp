#pragma once
// Run configuration: JSON config file; command-line flags override config
// keys, which override the built-in defaults.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "codeneed/errors.hpp"
#include "codeneed/features.hpp"
#include "codeneed/models/model.hpp"

namespace codeneed::config {

using json = nlohmann::json;

struct RunConfig {
    std::uint64_t seed = 42;
    double train_fraction = 0.7;
    std::string algorithm = "all";
    features::Thresholds thresholds; // 50 / 50 / 20 / 50%
    models::Hyperparams hyperparams;
    int day_start = 8;
    int day_end = 20;
    std::string data_dir;

    void validate() const {
        if (!(train_fraction > 0.0 && train_fraction < 1.0))
            throw CorpusError("config: train_fraction must be in (0, 1)");
        if (thresholds.r_max <= 0.0)
            throw CorpusError("config: thresholds.r_max must be positive");
        if (day_start < 0 || day_start > 23 || day_end < 1 || day_end > 24 ||
            day_start >= day_end)
            throw CorpusError("config: day window must satisfy 0 <= start < end <= 24");
        if (algorithm != "all" && !models::algorithm_from_name(algorithm))
            throw CorpusError("config: unknown algorithm '" + algorithm + "'");
        if (hyperparams.knn_k < 1 || hyperparams.rf_trees < 1 || hyperparams.rf_mtry < 0 ||
            hyperparams.svm_epochs < 1 || hyperparams.gb_rounds < 1 ||
            hyperparams.mlp_hidden < 1 || hyperparams.mlp_epochs < 1 ||
            hyperparams.svm_lambda <= 0.0 || hyperparams.gb_learning_rate <= 0.0 ||
            hyperparams.mlp_learning_rate <= 0.0)
            throw CorpusError("config: hyperparameters out of range");
    }
};

namespace detail {

template <typename T>
void maybe(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

} // namespace detail

inline void apply_json(RunConfig& cfg, const json& j) {
    detail::maybe(j, "seed", cfg.seed);
    detail::maybe(j, "train_fraction", cfg.train_fraction);
    detail::maybe(j, "algorithm", cfg.algorithm);
    detail::maybe(j, "data_dir", cfg.data_dir);
    if (auto it = j.find("thresholds"); it != j.end()) {
        detail::maybe(*it, "d_min_keywords", cfg.thresholds.d_min_keywords);
        detail::maybe(*it, "d_min_body", cfg.thresholds.d_min_body);
        detail::maybe(*it, "d_min_title", cfg.thresholds.d_min_title);
        detail::maybe(*it, "r_max", cfg.thresholds.r_max);
    }
    if (auto it = j.find("day_window"); it != j.end()) {
        if (!it->is_array() || it->size() != 2)
            throw CorpusError("config: day_window must be [start_hour, end_hour]");
        cfg.day_start = (*it)[0].get<int>();
        cfg.day_end = (*it)[1].get<int>();
    }
    if (auto it = j.find("hyperparams"); it != j.end()) {
        const json& h = *it;
        if (auto k = h.find("knn"); k != h.end()) detail::maybe(*k, "k", cfg.hyperparams.knn_k);
        if (auto s = h.find("lsvm"); s != h.end()) {
            detail::maybe(*s, "lambda", cfg.hyperparams.svm_lambda);
            detail::maybe(*s, "epochs", cfg.hyperparams.svm_epochs);
        }
        if (auto r = h.find("rf"); r != h.end()) {
            detail::maybe(*r, "trees", cfg.hyperparams.rf_trees);
            detail::maybe(*r, "mtry", cfg.hyperparams.rf_mtry);
            detail::maybe(*r, "bootstrap", cfg.hyperparams.rf_bootstrap);
        }
        if (auto g = h.find("gbstump"); g != h.end()) {
            detail::maybe(*g, "rounds", cfg.hyperparams.gb_rounds);
            detail::maybe(*g, "learning_rate", cfg.hyperparams.gb_learning_rate);
        }
        if (auto m = h.find("mlp"); m != h.end()) {
            detail::maybe(*m, "hidden", cfg.hyperparams.mlp_hidden);
            detail::maybe(*m, "learning_rate", cfg.hyperparams.mlp_learning_rate);
            detail::maybe(*m, "epochs", cfg.hyperparams.mlp_epochs);
        }
    }
}

inline RunConfig load_config(const std::filesystem::path& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw CorpusError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CorpusError("config file is not valid JSON: " + std::string(e.what()));
    }
    apply_json(cfg, j);
    return cfg;
}

} // namespace codeneed::config
