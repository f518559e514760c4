#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codeneed/corpus.hpp"
#include "support/cli_runner.hpp"
#include "support/effect_fixture.hpp"

using nlohmann::json;
using namespace testcli;

namespace {

const std::string kFixtures = CODENEED_FIXTURE_DIR;
const std::string kCorpus200 = kFixtures + "/corpus_200.jsonl";
const std::string kMicro = kFixtures + "/micro_corpus.jsonl";

std::string four_record_corpus() {
    // One question per category.
    std::ostringstream out;
    out << R"({"id":1,"title":"Fix crash","body_html":"<p>it crashes</p>","creation_utc":100,"reputation_at_post":5,"comments":[{"text":"please show your code","creation_utc":200}],"answers":[]})"
        << "\n";
    out << R"({"id":2,"title":"Fix other crash","body_html":"<pre><code>x=1</code></pre>","creation_utc":110,"reputation_at_post":5,"comments":[{"text":"add the code please","creation_utc":210}],"answers":[],"revisions":[{"creation_utc":400,"body_html":"<pre><code>x=1</code></pre>"}]})"
        << "\n";
    out << R"({"id":3,"title":"Loop bug","body_html":"<pre><code>while(1){}</code></pre>","creation_utc":120,"reputation_at_post":5,"comments":[],"answers":[]})"
        << "\n";
    out << R"({"id":4,"title":"Career advice","body_html":"<p>which language first?</p>","creation_utc":130,"reputation_at_post":5,"comments":[],"answers":[]})"
        << "\n";
    return out.str();
}

} // namespace

TEST_CASE("label prints per-category counts") {
    auto dir = fresh_dir("label_counts");
    spit(dir / "in.jsonl", four_record_corpus());
    auto r = run("label in.jsonl -o out.jsonl", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("MICO 1") != std::string::npos);
    CHECK(r.stdout_text.find("COAC 1") != std::string::npos);
    CHECK(r.stdout_text.find("CODS 1") != std::string::npos);
    CHECK(r.stdout_text.find("DONC 1") != std::string::npos);
    CHECK(r.stdout_text.find("total 4") != std::string::npos);

    std::ifstream labeled(dir / "out.jsonl");
    auto parsed = codeneed::corpus::parse_labeled_stream(labeled);
    CHECK(parsed.size() == 4);
}

TEST_CASE("label on empty input exits 0, strict promotes to 1") {
    auto dir = fresh_dir("label_empty");
    spit(dir / "in.jsonl", "");
    auto r = run("label in.jsonl -o out.jsonl", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("total 0") != std::string::npos);
    auto strict = run("--strict label in.jsonl -o out.jsonl", dir);
    CHECK(strict.exit_code == 1);
}

TEST_CASE("duplicate ids exit 2") {
    auto dir = fresh_dir("label_dup");
    std::string line =
        R"({"id":9,"title":"t","body_html":"b","creation_utc":1,"reputation_at_post":0,"comments":[],"answers":[]})";
    spit(dir / "in.jsonl", line + "\n" + line + "\n");
    auto r = run("label in.jsonl -o out.jsonl", dir);
    CHECK(r.exit_code == 2);
}

TEST_CASE("split writes a manifest honoring the fraction") {
    auto dir = fresh_dir("split");
    auto label = run("label '" + kCorpus200 + "' -o labeled.jsonl", dir);
    REQUIRE(label.exit_code == 0);
    auto r = run("split labeled.jsonl -o manifest.json --train-fraction 0.7", dir);
    REQUIRE(r.exit_code == 0);
    json manifest = json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["type"] == "codeneed-split");
    CHECK(manifest["train"].size() == 140);
    CHECK(manifest["test"].size() == 60);
}

TEST_CASE("train outputs are byte-identical across runs") {
    auto dir = fresh_dir("train_deterministic");
    REQUIRE(run("label '" + kCorpus200 + "' -o labeled.jsonl", dir).exit_code == 0);
    REQUIRE(run("train labeled.jsonl --out-dir run1 --algorithm all --seed 42", dir).exit_code ==
            0);
    REQUIRE(run("train labeled.jsonl --out-dir run2 --algorithm all --seed 42", dir).exit_code ==
            0);
    for (const char* name :
         {"schema.json", "split_manifest.json", "model_rf.json", "model_gbstump.json",
          "model_mlp.json", "model_gnb.json", "model_knn.json", "model_lsvm.json"}) {
        CAPTURE(name);
        std::string a = slurp(dir / "run1" / name);
        std::string b = slurp(dir / "run2" / name);
        REQUIRE_FALSE(a.empty());
        CHECK(a == b);
    }
    json schema = json::parse(slurp(dir / "run1" / "schema.json"));
    CHECK(schema["thresholds"]["d_min_keywords"] == 50);
    CHECK(schema["thresholds"]["d_min_body"] == 50);
    CHECK(schema["thresholds"]["d_min_title"] == 20);
}

TEST_CASE("knn k=1 predictions reproduce training labels through the cli") {
    auto dir = fresh_dir("knn_k1");
    REQUIRE(run("label '" + kMicro + "' -o labeled.jsonl", dir).exit_code == 0);
    spit(dir / "config.json", R"({"hyperparams": {"knn": {"k": 1}},
                                  "thresholds": {"d_min_keywords": 2, "d_min_body": 2,
                                                 "d_min_title": 2}})");
    REQUIRE(run("--config config.json train labeled.jsonl --out-dir m --algorithm knn --seed 7",
                dir)
                .exit_code == 0);

    // Build the training-subset question file from the manifest.
    json manifest = json::parse(slurp(dir / "m" / "split_manifest.json"));
    std::set<std::int64_t> train_ids;
    for (const auto& id : manifest["train"]) train_ids.insert(id.get<std::int64_t>());
    std::ifstream labeled(dir / "labeled.jsonl");
    auto all = codeneed::corpus::parse_labeled_stream(labeled);
    std::ofstream train_file(dir / "train_subset.jsonl");
    std::map<std::int64_t, bool> truth;
    for (const auto& lq : all) {
        if (train_ids.count(lq.question.id)) {
            codeneed::corpus::write_question(train_file, lq.question);
            truth[lq.question.id] = lq.label.needs_code;
        }
    }
    train_file.close();

    REQUIRE(run("predict --model m/model_knn.json train_subset.jsonl -o pred.csv", dir)
                .exit_code == 0);
    std::ifstream pred(dir / "pred.csv");
    std::string line;
    std::getline(pred, line); // header
    int checked = 0;
    while (std::getline(pred, line)) {
        std::istringstream ls(line);
        std::string id_s, label_s;
        std::getline(ls, id_s, ',');
        std::getline(ls, label_s, ',');
        CHECK((label_s == "1") == truth[std::stoll(id_s)]);
        ++checked;
    }
    CHECK(checked == static_cast<int>(train_ids.size()));
}

TEST_CASE("predict rejects questions preprocessed with different data files") {
    auto dir = fresh_dir("fingerprint_mismatch");
    REQUIRE(run("label '" + kMicro + "' -o labeled.jsonl", dir).exit_code == 0);
    spit(dir / "config.json", R"({"thresholds": {"d_min_keywords": 2, "d_min_body": 2,
                                                 "d_min_title": 2}})");
    REQUIRE(run("--config config.json train labeled.jsonl --out-dir m --algorithm gnb --seed 7",
                dir)
                .exit_code == 0);

    // A modified stop-word list changes the data hash and must be rejected.
    fs::path alt_data = dir / "data_alt";
    fs::create_directories(alt_data);
    fs::copy(CODENEED_DATA_DIR "/tagger_lexicon.tsv", alt_data / "tagger_lexicon.tsv");
    fs::copy(CODENEED_DATA_DIR "/abbreviations.txt", alt_data / "abbreviations.txt");
    spit(alt_data / "stopwords.txt", slurp(CODENEED_DATA_DIR "/stopwords.txt") + "zzzextra\n");

    auto bad = run("--data-dir '" + alt_data.string() +
                       "' predict --model m/model_gnb.json labeled.jsonl -o pred.csv",
                   dir);
    CHECK(bad.exit_code == 2);

    auto good = run("predict --model m/model_gnb.json labeled.jsonl -o pred.csv", dir);
    CHECK(good.exit_code == 0);
}

TEST_CASE("predict on an empty question file writes only the header") {
    auto dir = fresh_dir("predict_empty");
    REQUIRE(run("label '" + kMicro + "' -o labeled.jsonl", dir).exit_code == 0);
    spit(dir / "config.json", R"({"thresholds": {"d_min_keywords": 2, "d_min_body": 2,
                                                 "d_min_title": 2}})");
    REQUIRE(run("--config config.json train labeled.jsonl --out-dir m --algorithm gnb --seed 7",
                dir)
                .exit_code == 0);
    spit(dir / "empty.jsonl", "");
    auto r = run("predict --model m/model_gnb.json empty.jsonl -o pred.csv", dir);
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "pred.csv") == "id,needs_code,score\n");
    auto strict = run("--strict predict --model m/model_gnb.json empty.jsonl -o pred.csv", dir);
    CHECK(strict.exit_code == 1);
}

TEST_CASE("evaluate computes metrics and rejects unmatched ids") {
    auto dir = fresh_dir("evaluate");
    REQUIRE(run("label '" + kMicro + "' -o labeled.jsonl", dir).exit_code == 0);

    // Perfect predictions straight from the truth file.
    std::ifstream labeled(dir / "labeled.jsonl");
    auto all = codeneed::corpus::parse_labeled_stream(labeled);
    std::ostringstream pred;
    pred << "id,needs_code,score\n";
    for (const auto& lq : all)
        pred << lq.question.id << ',' << (lq.label.needs_code ? 1 : 0) << ",0.9\n";
    spit(dir / "pred.csv", pred.str());

    auto r = run("evaluate --predictions pred.csv --truth labeled.jsonl -o metrics.json "
                 "--no-timestamp",
                 dir);
    REQUIRE(r.exit_code == 0);
    json metrics = json::parse(slurp(dir / "metrics.json"));
    CHECK(metrics["accuracy"] == doctest::Approx(1.0));
    CHECK(metrics["per_class"]["needs_code"]["precision"] == doctest::Approx(1.0));
    CHECK(metrics.find("generated_at") == metrics.end());

    // Inverted predictions on the balanced micro corpus: accuracy 0.
    std::ostringstream inverted;
    inverted << "id,needs_code,score\n";
    for (const auto& lq : all)
        inverted << lq.question.id << ',' << (lq.label.needs_code ? 0 : 1) << ",0.5\n";
    spit(dir / "inverted.csv", inverted.str());
    auto inv = run("evaluate --predictions inverted.csv --truth labeled.jsonl -o inv.json", dir);
    REQUIRE(inv.exit_code == 0);
    CHECK(json::parse(slurp(dir / "inv.json"))["accuracy"] == doctest::Approx(0.0));

    // Unknown id: exit 2.
    spit(dir / "bad.csv", "id,needs_code,score\n99999,1,0.5\n");
    auto bad = run("evaluate --predictions bad.csv --truth labeled.jsonl -o x.json", dir);
    CHECK(bad.exit_code == 2);
}

TEST_CASE("effects reproduces the published percentages end to end") {
    auto dir = fresh_dir("effects");
    auto corpus = testgen::make_effect_corpus();
    std::ofstream labeled_out(dir / "labeled.jsonl");
    for (const auto& lq : corpus) codeneed::corpus::write_labeled(labeled_out, lq);
    labeled_out.close();

    auto r = run("effects labeled.jsonl --out-dir report --no-timestamp", dir);
    REQUIRE(r.exit_code == 0);
    json report = json::parse(slurp(dir / "report" / "effect_report.json"));
    auto rows = report["resolved"]["rows"];
    REQUIRE(rows.size() == 3);
    CHECK(rows[0]["pct"] == doctest::Approx(23.8));
    CHECK(rows[1]["pct"] == doctest::Approx(44.0));
    CHECK(rows[2]["pct"] == doctest::Approx(61.4));
    auto answered = report["answered"]["rows"];
    CHECK(answered[0]["pct"] == doctest::Approx(72.0));
    CHECK(answered[1]["pct"] == doctest::Approx(80.0));
    CHECK(answered[2]["pct"] == doctest::Approx(91.2));
    CHECK(report["resolved"]["chi_squared"]["run"] == true);
    CHECK(report["resolved"]["chi_squared"]["p_value"].get<double>() < 0.001);
    CHECK(report["discarded_coac_pre_code_acceptances"] == 14);

    // Determinism with --no-timestamp.
    auto again = run("effects labeled.jsonl --out-dir report2 --no-timestamp", dir);
    REQUIRE(again.exit_code == 0);
    CHECK(slurp(dir / "report" / "effect_report.json") ==
          slurp(dir / "report2" / "effect_report.json"));
    CHECK(slurp(dir / "report" / "effect_report.txt") ==
          slurp(dir / "report2" / "effect_report.txt"));

    // Timestamps appear without the flag.
    auto stamped = run("effects labeled.jsonl --out-dir report3", dir);
    REQUIRE(stamped.exit_code == 0);
    json with_ts = json::parse(slurp(dir / "report3" / "effect_report.json"));
    CHECK(with_ts.find("generated_at") != with_ts.end());
}

TEST_CASE("effects on a single-category corpus warns, exits 0, strict exits 1") {
    auto dir = fresh_dir("effects_partial");
    testgen::EffectCorpusSpec spec;
    spec.mico_resolved = spec.mico_answered_unresolved = spec.mico_unanswered = 0;
    spec.coac_resolved = spec.coac_discarded = spec.coac_answered_unresolved =
        spec.coac_unanswered = 0;
    spec.cods_resolved = 4;
    spec.cods_answered_unresolved = 2;
    spec.cods_unanswered = 2;
    auto corpus = testgen::make_effect_corpus(spec);
    std::ofstream labeled_out(dir / "labeled.jsonl");
    for (const auto& lq : corpus) codeneed::corpus::write_labeled(labeled_out, lq);
    labeled_out.close();

    auto r = run("effects labeled.jsonl --out-dir report", dir);
    CHECK(r.exit_code == 0);
    auto strict = run("--strict effects labeled.jsonl --out-dir report", dir);
    CHECK(strict.exit_code == 1);
    json report = json::parse(slurp(dir / "report" / "effect_report.json"));
    CHECK(report["gaps"].size() == 2);
}

TEST_CASE("train can emit feature matrices as csv") {
    auto dir = fresh_dir("emit_features");
    REQUIRE(run("label '" + kMicro + "' -o labeled.jsonl", dir).exit_code == 0);
    spit(dir / "config.json", R"({"thresholds": {"d_min_keywords": 2, "d_min_body": 2,
                                                 "d_min_title": 2}})");
    REQUIRE(run("--config config.json train labeled.jsonl --out-dir m --algorithm gnb "
                "--emit-features",
                dir)
                .exit_code == 0);
    std::string train_csv = slurp(dir / "m" / "features_train.csv");
    std::string test_csv = slurp(dir / "m" / "features_test.csv");
    REQUIRE_FALSE(train_csv.empty());
    REQUIRE_FALSE(test_csv.empty());
    CHECK(train_csv.rfind("id,needs_code,", 0) == 0);
    CHECK(train_csv.find("complex_sentences,code_elements") != std::string::npos);
    // header + 8 train rows (4 per class of the 12-question micro corpus)
    CHECK(std::count(train_csv.begin(), train_csv.end(), '\n') == 9);
    CHECK(std::count(test_csv.begin(), test_csv.end(), '\n') == 5);
}

TEST_CASE("command-line flags override config keys") {
    auto dir = fresh_dir("precedence");
    REQUIRE(run("label '" + kCorpus200 + "' -o labeled.jsonl", dir).exit_code == 0);
    spit(dir / "config.json", R"({"seed": 1, "algorithm": "gnb"})");
    REQUIRE(run("--config config.json --seed 42 train labeled.jsonl --out-dir with_config", dir)
                .exit_code == 0);
    REQUIRE(run("--seed 42 train labeled.jsonl --out-dir plain --algorithm gnb", dir).exit_code ==
            0);
    CHECK(slurp(dir / "with_config" / "model_gnb.json") ==
          slurp(dir / "plain" / "model_gnb.json"));
    // Config algorithm selection applied: only the gnb model was written.
    CHECK_FALSE(fs::exists(dir / "with_config" / "model_rf.json"));
}

TEST_CASE("invalid config values exit 2") {
    auto dir = fresh_dir("bad_config");
    spit(dir / "in.jsonl", "");
    spit(dir / "bad_fraction.json", R"({"train_fraction": 1.5})");
    CHECK(run("--config bad_fraction.json label in.jsonl -o out.jsonl", dir).exit_code == 2);
    spit(dir / "bad_window.json", R"({"day_window": [20, 8]})");
    CHECK(run("--config bad_window.json label in.jsonl -o out.jsonl", dir).exit_code == 2);
    spit(dir / "bad_alg.json", R"({"algorithm": "perceptron9000"})");
    CHECK(run("--config bad_alg.json label in.jsonl -o out.jsonl", dir).exit_code == 2);
    spit(dir / "not_json.json", "{{{{");
    CHECK(run("--config not_json.json label in.jsonl -o out.jsonl", dir).exit_code == 2);
}

TEST_CASE("pipeline outputs match the committed golden files") {
    auto dir = fresh_dir("golden");
    REQUIRE(run("label '" + kCorpus200 + "' -o labeled.jsonl", dir).exit_code == 0);
    CHECK(slurp(dir / "labeled.jsonl") == slurp(kFixtures + "/golden/labeled_200.jsonl"));

    REQUIRE(run("train labeled.jsonl --out-dir m --algorithm gnb --seed 42", dir).exit_code == 0);
    CHECK(slurp(dir / "m" / "schema.json") == slurp(kFixtures + "/golden/schema.json"));
    CHECK(slurp(dir / "m" / "model_gnb.json") == slurp(kFixtures + "/golden/model_gnb.json"));

    REQUIRE(run("predict --model m/model_gnb.json labeled.jsonl -o pred.csv", dir).exit_code == 0);
    CHECK(slurp(dir / "pred.csv") == slurp(kFixtures + "/golden/predictions_gnb.csv"));

    REQUIRE(run("evaluate --predictions pred.csv --truth labeled.jsonl -o metrics.json "
                "--no-timestamp",
                dir)
                .exit_code == 0);
    CHECK(slurp(dir / "metrics.json") == slurp(kFixtures + "/golden/metrics_gnb.json"));

    REQUIRE(run("effects labeled.jsonl --out-dir report --no-timestamp", dir).exit_code == 0);
    CHECK(slurp(dir / "report" / "effect_report.json") ==
          slurp(kFixtures + "/golden/effect_report.json"));
}
