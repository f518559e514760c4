// codeneed: label Q&A questions by code-snippet status, learn text features,
// train/evaluate six classifiers, and produce the statistical effect report.
//
// Subcommands: label | split | train | predict | evaluate | effects
// Exit codes: 0 success, 1 warnings promoted by --strict, 2 input errors.

#include <charconv>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codeneed/analysis.hpp"
#include "codeneed/config.hpp"
#include "codeneed/corpus.hpp"
#include "codeneed/errors.hpp"
#include "codeneed/features.hpp"
#include "codeneed/metrics.hpp"
#include "codeneed/models/model.hpp"
#include "codeneed/pipeline.hpp"
#include "codeneed/postag.hpp"
#include "codeneed/textprep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace codeneed;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitWarn = 1;
constexpr int kExitError = 2;

struct CliState {
    config::RunConfig cfg;
    bool strict = false;
    bool no_timestamp = false;
    bool warned = false;

    void warn(const std::string& message) {
        std::cerr << "warning: " << message << "\n";
        warned = true;
    }

    int finish() const { return (warned && strict) ? kExitWarn : kExitOk; }
};

std::string utc_now() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<corpus::QuestionRecord> read_questions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open input file: " + path);
    return corpus::parse_question_stream(in);
}

std::vector<corpus::LabeledQuestion> read_labeled(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open input file: " + path);
    return corpus::parse_labeled_stream(in);
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CorpusError("cannot write output file: " + path.string());
    return out;
}

const textprep::TextResources& resources(const CliState& state) {
    static std::optional<textprep::TextResources> cached;
    if (!cached) {
        std::string dir = state.cfg.data_dir;
        if (dir.empty()) {
            const char* env = std::getenv("CODENEED_DATA");
            dir = env ? env : CODENEED_DEFAULT_DATA_DIR;
        }
        cached = textprep::TextResources::load(dir);
    }
    return *cached;
}

std::vector<models::Algorithm> requested_algorithms(const std::string& name) {
    if (name == "all") return models::all_algorithms();
    auto alg = models::algorithm_from_name(name);
    if (!alg) throw CorpusError("unknown algorithm '" + name + "'");
    return {*alg};
}

// ---- label ----------------------------------------------------------------

int cmd_label(CliState& state, const std::string& input, const std::string& output) {
    auto questions = read_questions(input);
    std::map<corpus::Category, std::size_t> counts = {{corpus::Category::MICO, 0},
                                                      {corpus::Category::COAC, 0},
                                                      {corpus::Category::CODS, 0},
                                                      {corpus::Category::DONC, 0}};
    auto out = open_out(output);
    for (const auto& q : questions) {
        corpus::LabeledQuestion lq{q, corpus::categorize(q)};
        counts[lq.label.category]++;
        corpus::write_labeled(out, lq);
    }
    for (const auto& [cat, n] : counts)
        std::cout << corpus::category_name(cat) << " " << n << "\n";
    std::cout << "total " << questions.size() << "\n";
    if (questions.empty()) state.warn("input corpus is empty");
    return state.finish();
}

// ---- split ----------------------------------------------------------------

json split_manifest(const corpus::SplitResult& split, double fraction) {
    json j;
    j["format_version"] = 1;
    j["type"] = "codeneed-split";
    j["train_fraction"] = fraction;
    json train = json::array(), test = json::array();
    for (const auto& lq : split.train) train.push_back(lq.question.id);
    for (const auto& lq : split.test) test.push_back(lq.question.id);
    j["train"] = std::move(train);
    j["test"] = std::move(test);
    return j;
}

int cmd_split(CliState& state, const std::string& input, const std::string& output) {
    auto labeled = read_labeled(input);
    auto split = corpus::chronological_split(labeled, state.cfg.train_fraction);
    auto out = open_out(output);
    out << split_manifest(split, state.cfg.train_fraction).dump(2) << "\n";
    std::cout << "train " << split.train.size() << "\n";
    std::cout << "test " << split.test.size() << "\n";
    return state.finish();
}

// ---- train ----------------------------------------------------------------

int cmd_train(CliState& state, const std::string& input, const std::string& out_dir,
              bool emit_features) {
    auto labeled = read_labeled(input);
    auto split = corpus::chronological_split(labeled, state.cfg.train_fraction);

    const auto& res = resources(state);
    postag::RuleTagger tagger(res);
    features::FeatureSchema schema =
        features::learn_schema(split.train, res, tagger, state.cfg.thresholds);

    fs::path dir(out_dir);
    fs::create_directories(dir);
    {
        auto out = open_out(dir / "schema.json");
        out << features::schema_to_json(schema).dump(2) << "\n";
    }
    {
        auto out = open_out(dir / "split_manifest.json");
        out << split_manifest(split, state.cfg.train_fraction).dump(2) << "\n";
    }

    pipeline::FeatureTable train_table = pipeline::build_features(split.train, schema, res, tagger);
    pipeline::FeatureTable test_table = pipeline::build_features(split.test, schema, res, tagger);
    if (emit_features) {
        auto out_train = open_out(dir / "features_train.csv");
        features::write_feature_csv(out_train, schema, train_table.ids, train_table.labels,
                                    train_table.vectors);
        auto out_test = open_out(dir / "features_test.csv");
        features::write_feature_csv(out_test, schema, test_table.ids, test_table.labels,
                                    test_table.vectors);
    }

    std::cout << "schema keywords=" << schema.keywords.size()
              << " title_patterns=" << schema.title_patterns.size()
              << " body_patterns=" << schema.body_patterns.size()
              << " fingerprint=" << schema.fingerprint << "\n";

    for (models::Algorithm alg : requested_algorithms(state.cfg.algorithm)) {
        models::TrainedModel model =
            models::train(alg, train_table.X, train_table.labels, state.cfg.seed,
                          state.cfg.hyperparams, schema.fingerprint);
        model.schema = schema;
        std::string name = "model_" + models::algorithm_name(alg) + ".json";
        models::save_model(model, (dir / name).string());
        std::cout << "wrote " << name << "\n";
    }
    return state.finish();
}

// ---- predict ----------------------------------------------------------------

int cmd_predict(CliState& state, const std::string& model_path, const std::string& input,
                const std::string& output) {
    models::TrainedModel model = models::load_model(model_path);
    if (!model.schema)
        throw ModelIoError("model file lacks an embedded schema; cannot featurize questions");

    const auto& res = resources(state);
    features::verify_resources(*model.schema, res);
    postag::RuleTagger tagger(res);

    auto questions = read_questions(input);
    auto out = open_out(output);
    out << "id,needs_code,score\n";
    for (const auto& q : questions) {
        features::FeatureVector fv = features::featurize(q, *model.schema, res, tagger);
        auto row = fv.to_row();
        models::Prediction pred = models::predict_one(model, row);
        out << q.id << ',' << (pred.needs_code ? 1 : 0) << ',' << format_double(pred.score)
            << "\n";
    }
    if (questions.empty()) state.warn("no questions to predict");
    return state.finish();
}

// ---- evaluate ----------------------------------------------------------------

struct PredictionRow {
    std::int64_t id;
    int label;
};

std::vector<PredictionRow> read_predictions(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open predictions file: " + path);
    std::vector<PredictionRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line_no == 1 && line.rfind("id,", 0) == 0) continue; // header
        std::istringstream ls(line);
        std::string id_s, label_s;
        if (!std::getline(ls, id_s, ',') || !std::getline(ls, label_s, ','))
            throw ParseError(line_no, "expected 'id,needs_code,score'");
        try {
            rows.push_back({std::stoll(id_s), std::stoi(label_s)});
        } catch (const std::exception&) {
            throw ParseError(line_no, "malformed prediction row");
        }
    }
    return rows;
}

json metrics_to_json(const metrics::MetricsReport& r) {
    json j;
    j["format_version"] = 1;
    j["type"] = "codeneed-metrics";
    j["confusion"] = {{"tp", r.tp}, {"fp", r.fp}, {"fn", r.fn}, {"tn", r.tn}};
    auto cls = [](const metrics::ClassMetrics& m) {
        json c;
        c["precision"] = m.precision;
        c["recall"] = m.recall;
        c["f1"] = m.f1;
        if (m.precision_undefined) c["precision_undefined"] = true;
        if (m.recall_undefined) c["recall_undefined"] = true;
        return c;
    };
    j["per_class"] = {{"needs_code", cls(r.needs_code)}, {"no_code", cls(r.no_code)}};
    j["accuracy"] = r.accuracy;
    return j;
}

void print_metrics_table(const metrics::MetricsReport& r) {
    auto pct = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%5.1f%%", 100.0 * v);
        return std::string(buf);
    };
    std::cout << "Class        Precision  Recall   F1-Score  Accuracy\n";
    std::cout << "needs-code   " << pct(r.needs_code.precision) << "     " << pct(r.needs_code.recall)
              << "   " << pct(r.needs_code.f1) << "    " << pct(r.accuracy) << "\n";
    std::cout << "no-code      " << pct(r.no_code.precision) << "     " << pct(r.no_code.recall)
              << "   " << pct(r.no_code.f1) << "\n";
}

int cmd_evaluate(CliState& state, const std::string& predictions_path,
                 const std::string& truth_path, const std::string& output) {
    auto predictions = read_predictions(predictions_path);
    auto truth = read_labeled(truth_path);

    std::map<std::int64_t, int> truth_by_id;
    for (const auto& lq : truth) truth_by_id[lq.question.id] = lq.label.needs_code ? 1 : 0;
    if (predictions.size() != truth_by_id.size())
        throw CorpusError("predictions and truth cover different question sets");

    std::vector<int> y_true, y_pred;
    for (const auto& row : predictions) {
        auto it = truth_by_id.find(row.id);
        if (it == truth_by_id.end())
            throw CorpusError("prediction id " + std::to_string(row.id) + " not in truth corpus");
        y_true.push_back(it->second);
        y_pred.push_back(row.label);
    }
    metrics::MetricsReport report = metrics::classification_metrics(y_true, y_pred);

    json j = metrics_to_json(report);
    if (!state.no_timestamp) j["generated_at"] = utc_now();
    auto out = open_out(output);
    out << j.dump(2) << "\n";
    print_metrics_table(report);
    return state.finish();
}

// ---- effects ----------------------------------------------------------------

int cmd_effects(CliState& state, const std::string& input, const std::string& out_dir) {
    auto labeled = read_labeled(input);
    analysis::EffectOptions options;
    options.day_start = state.cfg.day_start;
    options.day_end = state.cfg.day_end;
    analysis::EffectReport report = analysis::effect_report(labeled, options);

    fs::path dir(out_dir);
    fs::create_directories(dir);
    json j = analysis::effect_report_to_json(report);
    if (!state.no_timestamp) j["generated_at"] = utc_now();
    {
        auto out = open_out(dir / "effect_report.json");
        out << j.dump(2) << "\n";
    }
    {
        auto out = open_out(dir / "effect_report.txt");
        out << analysis::effect_report_to_text(report);
    }
    for (const auto& gap : report.gaps) state.warn(gap);
    if (labeled.empty()) state.warn("input corpus is empty");
    std::cout << "categories " << report.categories_present.size() << "\n";
    std::cout << "discarded_coac " << report.discarded_coac << "\n";
    return state.finish();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"question code-snippet-need labeling, classification and effect analysis"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path, data_dir;
    std::optional<std::uint64_t> seed_flag;
    std::optional<double> fraction_flag;
    std::optional<std::string> algorithm_flag;
    CliState state;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--data-dir", data_dir, "directory with stopwords/lexicon/abbreviations");
    app.add_option("--seed", seed_flag, "random seed");
    app.add_option("--train-fraction", fraction_flag, "chronological train fraction (0,1)");
    app.add_option("--algorithm", algorithm_flag, "rf|gbstump|mlp|gnb|knn|lsvm|all");
    app.add_flag("--strict", state.strict, "promote warnings to exit code 1");
    app.add_flag("--no-timestamp", state.no_timestamp, "omit timestamps for byte-stable output");

    std::string in_path, out_path = "-", model_path, predictions_path, truth_path;
    std::string out_dir = ".";
    bool emit_features = false;

    auto* label = app.add_subcommand("label", "categorize questions (MICO/COAC/CODS/DONC)");
    std::string label_out = "labeled.jsonl";
    label->add_option("input", in_path, "question JSONL file")->required();
    label->add_option("-o,--output", label_out, "labeled output file");

    auto* split = app.add_subcommand("split", "chronological train/test split manifest");
    std::string split_out = "split_manifest.json";
    split->add_option("input", in_path, "labeled JSONL file")->required();
    split->add_option("-o,--output", split_out, "manifest output file");

    auto* train = app.add_subcommand("train", "learn schema and train classifier(s)");
    train->add_option("input", in_path, "labeled JSONL file")->required();
    train->add_option("--out-dir", out_dir, "output directory");
    train->add_flag("--emit-features", emit_features, "also write feature CSV matrices");

    auto* predict = app.add_subcommand("predict", "predict needs-code for questions");
    std::string predict_out = "predictions.csv";
    predict->add_option("--model", model_path, "trained model file")->required();
    predict->add_option("input", in_path, "question JSONL file")->required();
    predict->add_option("-o,--output", predict_out, "predictions output file");

    auto* evaluate = app.add_subcommand("evaluate", "score predictions against labeled truth");
    std::string metrics_out = "metrics.json";
    evaluate->add_option("--predictions", predictions_path, "predictions CSV")->required();
    evaluate->add_option("--truth", truth_path, "labeled JSONL file")->required();
    evaluate->add_option("-o,--output", metrics_out, "metrics output file");

    auto* effects = app.add_subcommand("effects", "statistical effect report");
    effects->add_option("input", in_path, "labeled JSONL file")->required();
    effects->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) state.cfg = config::load_config(config_path);
        if (!data_dir.empty()) state.cfg.data_dir = data_dir;
        if (seed_flag) state.cfg.seed = *seed_flag;
        if (fraction_flag) state.cfg.train_fraction = *fraction_flag;
        if (algorithm_flag) state.cfg.algorithm = *algorithm_flag;
        state.cfg.validate();

        if (label->parsed()) return cmd_label(state, in_path, label_out);
        if (split->parsed()) return cmd_split(state, in_path, split_out);
        if (train->parsed()) return cmd_train(state, in_path, out_dir, emit_features);
        if (predict->parsed()) return cmd_predict(state, model_path, in_path, predict_out);
        if (evaluate->parsed()) return cmd_evaluate(state, predictions_path, truth_path, metrics_out);
        if (effects->parsed()) return cmd_effects(state, in_path, out_dir);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}
