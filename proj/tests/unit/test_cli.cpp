#include <gtest/gtest.h>

#include <cstdlib>
#include <nlohmann/json.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "mltm/corpus.hpp"
#include "mltm/error.hpp"
#include "mltm/model.hpp"
#include "mltm/schedule.hpp"
#include "mltm/transfer.hpp"
#include "mltm_cli/commands.hpp"
#include "mltm_cli/config.hpp"

using namespace mltm;
using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mltm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// Small synthetic dataset written once per test binary.
const test::TempDir& synth_dir() {
  static test::TempDir dir("mltm-cli");
  static bool done = false;
  if (!done) {
    const auto r = invoke({"synth", "--output-dir", dir.path().string(), "--topics", "3", "--vocab", "60", "--docs", "30",
                        "--doc-length", "20", "--sharpness", "1e9", "--reference-pairs", "100", "--link-fraction",
                        "0.3", "--seed", "5", "--log-level", "off"});
    EXPECT_EQ(r.code, 0) << r.err;
    done = true;
  }
  return dir;
}

Outcome train(const std::filesystem::path& out_dir, std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"train",         "--config",     (synth_dir() / "config.json").string(),
                                "--output-dir",  out_dir.string(), "--iterations",
                                "15",            "--topics",     "3",
                                "--log-level",   "off"};
  args.insert(args.end(), extra.begin(), extra.end());
  return invoke(args);
}

}  // namespace

TEST(Config, ParsesKeysAndRejectsUnknown) {
  const auto c = cli::config_from_json_text(R"({"model": "softlink+voclink", "seed": 9,
      "hyperparams": {"topics": 7, "alpha": 0.2}, "languages": ["en", "de"],
      "focus": {"threshold": 0.6, "scope": "corpus_wise"}, "anneal": {"schedule": "fixed", "interval": 5},
      "hardlink": "joint", "dictionary_fraction": 0.4})");
  EXPECT_EQ(c.kind, ModelKind::kSoftLinkVocLink);
  EXPECT_EQ(c.hyperparams.seed, 9u);
  EXPECT_EQ(c.hyperparams.topics, 7u);
  EXPECT_DOUBLE_EQ(c.hyperparams.alpha, 0.2);
  EXPECT_DOUBLE_EQ(c.hyperparams.beta, 0.01);
  EXPECT_EQ(c.language1, "en");
  EXPECT_EQ(c.focus.scope, FocusScope::kCorpusWise);
  EXPECT_EQ(c.anneal.schedule, AnnealSchedule::kFixed);
  EXPECT_EQ(c.anneal.interval, 5u);
  EXPECT_EQ(c.hardlink, HardLinkFormulation::kJoint);
  EXPECT_DOUBLE_EQ(c.dictionary_fraction, 0.4);

  EXPECT_THROW(cli::config_from_json_text(R"({"modle": "lda"})"), ConfigError);
  EXPECT_THROW(cli::config_from_json_text(R"({"hyperparams": {"topics": "many"}})"), ConfigError);
  EXPECT_THROW(cli::config_from_json_text("{"), ConfigError);
}

TEST(Config, JsonRoundTripAndHash) {
  auto c = cli::config_from_json_text(R"({"model": "softlink", "languages": ["en", "de"]})");
  const auto again = cli::config_from_json_text(cli::config_to_json(c));
  EXPECT_EQ(cli::config_to_json(again), cli::config_to_json(c));
  const auto h = cli::config_hash(c);
  c.threads = 4;
  c.output_dir = "/elsewhere";
  EXPECT_EQ(cli::config_hash(c), h);
  c.hyperparams.seed = 2;
  EXPECT_NE(cli::config_hash(c), h);
  EXPECT_EQ(cli::hex64(0xabcULL), "0000000000000abc");
}

TEST(Config, ValidationChecksPaths) {
  auto c = cli::config_from_json_text(R"({"languages": ["en", "de"]})");
  c.corpus1 = "/no/such/file";
  c.corpus2 = "/no/such/file";
  EXPECT_THROW(cli::validate_for_training(c), ConfigError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"--help"}).code, 0);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"train", "--model", "plsa", "--log-level", "off"}).code, 2);
  test::TempDir dir;
  EXPECT_EQ(invoke({"inspect", "--model", (dir / "missing.json").string(), "--log-level", "off"}).code, 3);
  test::write_file(dir / "bad.jsonl", "{broken\n");
  test::write_file(dir / "ok.jsonl", "{\"id\":\"a\",\"lang\":\"de\",\"tokens\":[\"x\"]}\n");
  EXPECT_EQ(invoke({"train", "--lang1", "en", "--lang2", "de", "--corpus1", (dir / "bad.jsonl").string(), "--corpus2",
                 (dir / "ok.jsonl").string(), "--output-dir", dir.path().string(), "--log-level", "off"})
                .code,
            3);
}

TEST(Cli, BinaryReportsExitCodes) {
  const std::string bin = MLTM_CLI_PATH;
  EXPECT_EQ(std::system((bin + " --version > /dev/null").c_str()), 0);
  const int status = std::system((bin + " train --model nope --log-level off 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST(Cli, TrainIsByteIdenticalOnRerun) {
  test::TempDir a, b;
  ASSERT_EQ(train(a.path()).code, 0);
  ASSERT_EQ(train(b.path()).code, 0);
  for (const char* f : {"model.json", "anneal_log.jsonl"}) EXPECT_EQ(test::read_file(a / f), test::read_file(b / f)) << f;
  const auto manifest = json::parse(test::read_file(a / "manifest.json"));
  EXPECT_EQ(manifest["config_hash"], json::parse(test::read_file(b / "manifest.json"))["config_hash"]);
  EXPECT_EQ(manifest["command"], "train");
  EXPECT_EQ(manifest["seed"], 5);
  EXPECT_EQ(manifest["config_hash"].get<std::string>().size(), 16u);
}

TEST(Cli, SoftLinkWithFullFocusMatchesLda) {
  test::TempDir a, b;
  ASSERT_EQ(train(a.path(), {"--model", "softlink", "--focus-threshold", "1"}).code, 0);
  ASSERT_EQ(train(b.path(), {"--model", "lda"}).code, 0);
  const auto soft = load_model(a / "model.json");
  const auto lda = load_model(b / "model.json");
  EXPECT_EQ(soft.phi, lda.phi);
  EXPECT_EQ(soft.theta, lda.theta);
}

TEST(Cli, EveryModelKindTrainsAndRoundTrips) {
  for (const std::string kind : {"lda", "hardlink", "softlink", "voclink", "softlink+voclink"}) {
    test::TempDir dir;
    std::vector<std::string> extra{"--model", kind, "--check-invariants"};
    if (kind == "softlink") extra.insert(extra.end(), {"--anneal", "fixed", "--interval", "5"});
    const auto r = train(dir.path(), extra);
    ASSERT_EQ(r.code, 0) << kind << ": " << r.err;
    const auto model = load_model(dir / "model.json");
    EXPECT_EQ(to_string(model.kind), kind);
    EXPECT_EQ(serialize_model(model) + "\n", test::read_file(dir / "model.json"));
    const auto events = read_anneal_log(dir / "anneal_log.jsonl");
    EXPECT_EQ(events.size(), kind == "softlink" ? 3u : 0u);
  }
}

TEST(Cli, InferEvalInspectPipeline) {
  test::TempDir dir;
  ASSERT_EQ(train(dir.path(), {"--model", "softlink", "--focus-threshold", "0.6"}).code, 0);
  const auto model = (dir / "model.json").string();
  const auto corpus2 = (synth_dir() / "corpus_l2.jsonl").string();

  auto r = invoke({"infer", "--model", model, "--corpus", corpus2, "--side", "2", "--iterations", "20", "--output-dir",
                dir.path().string(), "--log-level", "off"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto theta = load_theta(dir / "theta_l2.json");
  EXPECT_EQ(theta.topics, 3u);
  EXPECT_EQ(theta.doc_ids.size(), 30u);

  r = invoke({"eval", "--model", model, "--which", "cnpmi,classify,lis", "--reference",
           (synth_dir() / "reference.jsonl").string(), "--corpus1", (synth_dir() / "corpus_l1.jsonl").string(),
           "--corpus2", corpus2, "--theta2", (dir / "theta_l2.json").string(), "--dictionary",
           (synth_dir() / "dictionary.tsv").string(), "--output-dir", dir.path().string(), "--log-level", "off"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = json::parse(test::read_file(dir / "eval_report.json"));
  EXPECT_EQ(report, json::parse(r.out));
  EXPECT_EQ(report["cnpmi_per_topic"].size(), 3u);
  EXPECT_GE(report["cnpmi_mean"].get<double>(), -1.0);
  EXPECT_LE(report["cnpmi_mean"].get<double>(), 1.0);
  EXPECT_TRUE(report.contains("lis_final"));

  r = invoke({"inspect", "--model", model, "--top-words", "4", "--log-level", "off"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NO_THROW(json::parse(r.out));

  r = invoke({"infer", "--model", model, "--corpus", corpus2, "--side", "3", "--log-level", "off"});
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, TransferBuildDumpsLoadableMatrices) {
  test::TempDir dir;
  const auto r = invoke({"transfer-build", "--config", (synth_dir() / "config.json").string(), "--focus-threshold", "0.5",
                      "--output-dir", dir.path().string(), "--log-level", "off"});
  ASSERT_EQ(r.code, 0) << r.err;
  LoaderOptions opt;
  opt.remove_top_frequent = 0;
  const auto c1 = load_corpus(synth_dir() / "corpus_l1.jsonl", "l1", opt);
  const auto c2 = load_corpus(synth_dir() / "corpus_l2.jsonl", "l2", opt);
  const auto m = read_transfer_tsv(dir / "transfer_l2_from_l1.tsv", c2, c1);
  EXPECT_GT(m.nonempty_rows(), 0u);
  const auto back = read_transfer_tsv(dir / "transfer_l1_from_l2.tsv", c1, c2);
  EXPECT_EQ(back.rows.size(), c1.size());
}
