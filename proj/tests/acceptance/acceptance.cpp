// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "enumeration.hpp"
#include "fixtures.hpp"
#include "mltm/conditionals.hpp"
#include "mltm/eval.hpp"
#include "mltm/logistic.hpp"
#include "mltm/schedule.hpp"
#include "mltm/synthetic.hpp"
#include "mltm/trainer.hpp"
#include "mltm_cli/commands.hpp"
#include "mltm_cli/config.hpp"
#include "oracles.hpp"

using namespace mltm;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

Verdict hardlink_equivalence() {
  Verdict v;
  const double worst = test::hardlink_equivalence_worst(2024, 1000);
  v.require(worst < 1e-12, "1000 random states, max |joint - conditional| = " + fmt("%.3g", worst));

  SyntheticParams p;
  p.topics = 5;
  p.vocab_per_language = 200;
  p.docs_per_language = 80;
  p.doc_length = 30;
  p.link_fraction = 0.5;
  p.seed = 4;
  const auto data = generate_synthetic(p);
  std::array<std::vector<std::array<std::vector<std::vector<TopicId>>, 2>>, 2> z;
  for (int f = 0; f < 2; ++f) {
    TrainSpec spec;
    spec.kind = ModelKind::kHardLink;
    spec.hyperparams.topics = 5;
    spec.hyperparams.train_iterations = 50;
    spec.hyperparams.seed = 9;
    spec.hardlink = f == 0 ? HardLinkFormulation::kConditional : HardLinkFormulation::kJoint;
    spec.on_sweep = [&](std::size_t, const CountState& s) { z[f].push_back({s.sides[0].z, s.sides[1].z}); };
    train(data.corpus, spec);
  }
  v.require(z[0].size() == 50 && z[0] == z[1], "50-sweep HardLink trajectories identical across formulations");
  return v;
}

// ---------------------------------------------------------------- criterion 2

Verdict enumeration() {
  Verdict v;
  for (auto kind : {ModelKind::kLda, ModelKind::kHardLink, ModelKind::kSoftLink, ModelKind::kVocLink,
                    ModelKind::kSoftLinkVocLink}) {
    const auto r = test::check_against_enumeration(test::tiny_instances(kind));
    v.require(r.max_error < 1e-10 && r.comparisons > 0,
              to_string(kind) + " " + std::to_string(r.instances) + " instances max err " + fmt("%.2g", r.max_error));
  }
  return v;
}

// ---------------------------------------------------------------- criterion 3

Verdict reductions() {
  Verdict v;
  const double indicator = test::softlink_indicator_worst(7, 1000);
  const double empty = test::softlink_empty_worst(8, 1000);
  const double voc = test::voclink_empty_worst(9, 1000);
  v.require(indicator < 1e-12, "SoftLink(indicator) vs HardLink " + fmt("%.2g", indicator));
  v.require(empty < 1e-12, "SoftLink(empty, pi=1) vs LDA " + fmt("%.2g", empty));
  v.require(voc < 1e-12, "VocLink(empty dictionary) vs LDA " + fmt("%.2g", voc));
  return v;
}

// ---------------------------------------------------------------- criterion 4

TransferMatrix one_row(std::vector<double> w) {
  TransferMatrix m;
  m.source_count = w.size();
  TransferRow row;
  for (std::size_t i = 0; i < w.size(); ++i) row.push_back({static_cast<std::uint32_t>(i), w[i]});
  m.rows.push_back(row);
  return m;
}

Verdict transfer() {
  Verdict v;
  Rng rng(20240601);
  int exact = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t v1 = 5 + rng.below(20), v2 = 5 + rng.below(20);
    auto source = test::random_corpus(rng, "en", v1, 1 + rng.below(20), 0, 12);
    auto target = test::random_corpus(rng, "de", v2, 1 + rng.below(20), 0, 12);
    std::vector<Concept> concepts;
    for (std::size_t i = 0, n = rng.below(30); i < n; ++i)
      concepts.push_back({static_cast<WordId>(rng.below(v1)), static_cast<WordId>(rng.below(v2))});
    const BilingualDictionary dict(concepts, v1, v2);
    exact += build_transfer_matrix(target, source, dict) == test::brute_force_transfer(target, source, concepts);
  }
  v.require(exact == 50, std::to_string(exact) + "/50 random corpora equal the brute-force scores exactly");

  double err = 0.0;
  const auto focused = static_focus(one_row({0.5, 0.3, 0.2}), {0.5, FocusScope::kDocWise});
  err = std::max({err, std::abs(focused.rows[0][0].weight - 0.625), std::abs(focused.rows[0][1].weight - 0.375)});
  const bool support = focused.rows[0].size() == 2;
  const auto m = one_row({0.5, 0.3, 0.2});
  const bool identity = static_focus(m, {0.0, FocusScope::kDocWise}) == m && anneal_matrix(m, 1.0) == m;
  const bool emptied = static_focus(m, {1.0, FocusScope::kDocWise}).nonempty_rows() == 0;
  const auto annealed = anneal_matrix(one_row({0.8, 0.2}), 0.9);
  const double a = std::pow(0.8, 1 / 0.9), b = std::pow(0.2, 1 / 0.9);
  err = std::max({err, std::abs(annealed.rows[0][0].weight - a / (a + b)),
                  std::abs(annealed.rows[0][1].weight - b / (a + b))});
  const auto uniform = anneal_matrix(one_row({0.25, 0.25, 0.25, 0.25}), 0.9);
  for (const auto& e : uniform.rows[0])
    err = std::max(err, std::abs(e.weight - 0.25));
  v.require(err < 1e-12 && support && identity && emptied, "focus/anneal examples max err " + fmt("%.2g", err));

  double lowest = 1.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> w{rng.uniform() + 0.05, rng.uniform() + 0.05, rng.uniform() + 0.05};
    std::sort(w.begin(), w.end());
    if (w[2] - w[1] < 1e-3) continue;
    auto row = one_row(w);
    for (int i = 0; i < 200; ++i) row = anneal_matrix(row, 0.9);
    lowest = std::min(lowest, mean_row_max(row));
  }
  v.require(lowest > 0.999, "200 anneals at tau=0.9, lowest max weight " + fmt("%.6f", lowest));
  return v;
}

// ------------------------------------------------------------ criteria 5 and 6

struct RunScores {
  double cnpmi = 0.0;
  double f1_12 = 0.0;
  double f1_21 = 0.0;
  double majority_12 = 0.0;
  double majority_21 = 0.0;
};

struct SyntheticSetup {
  SyntheticData data;
  ReferenceCorpus reference;
};

SyntheticSetup synthetic_setup(std::uint64_t seed) {
  SyntheticParams p;
  p.topics = 5;
  p.vocab_per_language = 500;
  p.docs_per_language = 200;
  p.doc_length = 50;
  p.dict_coverage = 0.3;
  p.topic_sharpness = std::numeric_limits<double>::infinity();
  p.seed = seed;
  SyntheticSetup s{generate_synthetic(p), {}};
  s.reference = encode_reference(generate_reference(s.data, 1000, seed + 1), s.data.corpus.side1.vocabulary,
                                 s.data.corpus.side2.vocabulary);
  return s;
}

RunScores run_model(const SyntheticSetup& s, ModelKind kind, double dictionary_fraction, std::uint64_t seed) {
  const auto dict = subsample(s.data.dictionary, dictionary_fraction, seed);
  TrainSpec spec;
  spec.kind = kind;
  spec.hyperparams.topics = 5;
  spec.hyperparams.train_iterations = 500;
  spec.hyperparams.seed = seed;
  spec.dictionary = &dict;
  if (uses_transfer(kind)) {
    auto pair = build_transfer_pair(s.data.corpus, dict, {0.6, FocusScope::kDocWise});
    spec.transfer_to_side2 = std::move(pair.to_side2);
    spec.transfer_to_side1 = std::move(pair.to_side1);
  }
  const auto r = train(s.data.corpus, spec);
  RunScores scores;
  scores.cnpmi = cnpmi_model(r.model, s.reference).mean;
  const auto t1 = labeled_thetas(r.model, 0, s.data.corpus.side1);
  const auto t2 = labeled_thetas(r.model, 1, s.data.corpus.side2);
  const auto c12 = classify_crosslingual(t1, t2);
  const auto c21 = classify_crosslingual(t2, t1);
  scores.f1_12 = c12.f1_micro;
  scores.f1_21 = c21.f1_micro;
  scores.majority_12 = c12.majority_baseline_f1;
  scores.majority_21 = c21.majority_baseline_f1;
  return scores;
}

Verdict synthetic_recovery() {
  Verdict v;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = synthetic_setup(seed);
    const auto lda = run_model(s, ModelKind::kLda, 1.0, seed);
    const auto soft = run_model(s, ModelKind::kSoftLink, 1.0, seed);
    const double gap = soft.cnpmi - lda.cnpmi;
    const double lift = std::min(soft.f1_12 - soft.majority_12, soft.f1_21 - soft.majority_21);
    v.require(gap >= 0.05 && lift >= 0.15, "seed " + std::to_string(seed) + ": CNPMI softlink " +
                                               fmt("%.3f", soft.cnpmi) + " lda " + fmt("%.3f", lda.cnpmi) +
                                               ", F1 " + fmt("%.3f", soft.f1_12) + "/" + fmt("%.3f", soft.f1_21) +
                                               " majority " + fmt("%.3f", soft.majority_12));
  }
  return v;
}

Verdict dictionary_trend() {
  Verdict v;
  double soft_full = 0, soft_part = 0, voc_full = 0, voc_part = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto s = synthetic_setup(seed);
    soft_full += run_model(s, ModelKind::kSoftLink, 1.0, seed).cnpmi / 3;
    soft_part += run_model(s, ModelKind::kSoftLink, 0.2, seed).cnpmi / 3;
    voc_full += run_model(s, ModelKind::kVocLink, 1.0, seed).cnpmi / 3;
    voc_part += run_model(s, ModelKind::kVocLink, 0.2, seed).cnpmi / 3;
  }
  v.require(std::abs(soft_full - soft_part) < 0.05,
            "softlink CNPMI 1.0 " + fmt("%.3f", soft_full) + " vs 0.2 " + fmt("%.3f", soft_part));
  v.require(voc_full - voc_part >= 0.02,
            "voclink CNPMI 1.0 " + fmt("%.3f", voc_full) + " vs 0.2 " + fmt("%.3f", voc_part));
  return v;
}

// ---------------------------------------------------------------- criterion 7

Verdict cnpmi_fixtures() {
  Verdict v;
  const auto f = test::coherent_fixture(5, 20, 50);
  const auto coherent = cnpmi_model(f.model, f.reference);
  v.require(coherent.mean == 1.0, "coherent model mean " + fmt("%.17g", coherent.mean));

  Rng rng(77);
  const auto model = test::random_phi_model(rng, 5, 300, 300);
  const auto ref = test::random_reference(rng, 300, 300, 10000, 30);
  const auto random = cnpmi_model(model, ref);
  v.require(std::abs(random.mean) < 0.05, "random model mean " + fmt("%.4f", random.mean) + " on 10000 pairs");

  bool bounded = true;
  const CooccurrenceIndex index(ref);
  for (WordId a = 0; a < 300; ++a)
    for (WordId b = 0; b < 300; b += 7) {
      const double x = npmi(index.joint(a, b), index.doc_freq(0, a), index.doc_freq(1, b), index.pairs());
      bounded = bounded && x >= -1.0 && x <= 1.0;
    }
  for (double x : random.per_topic) bounded = bounded && x >= -1.0 && x <= 1.0;
  v.require(bounded, "all NPMI terms and topic scores within [-1, 1]");
  return v;
}

// ---------------------------------------------------------------- criterion 8

Verdict lis_fixtures() {
  Verdict v;
  const std::size_t n = 200, K = 5;
  std::vector<Concept> concepts;
  for (WordId w = 0; w < n; ++w) concepts.push_back({w, w});
  const BilingualDictionary dict(concepts, n, n);

  CountState same, apart;
  for (auto* s : {&same, &apart}) s->sides = {LanguageCounts(1, n, K), LanguageCounts(1, n, K)};
  for (WordId w = 0; w < n; ++w)
    for (int i = 0; i < 5; ++i) {
      const auto k = static_cast<TopicId>((w + i) % K);
      same.sides[0].update(0, w, k, 1);
      same.sides[1].update(0, w, k, 1);
      apart.sides[0].update(0, w, 0, 1);
      apart.sides[1].update(0, w, 1, 1);
    }
  const double sym = compute_lis(same, dict, 0.01, 5, 1);
  const double sep = compute_lis(apart, dict, 0.01, 5, 1);
  v.require(std::abs(sym - 0.5) <= 0.1, "symmetric LIS " + fmt("%.3f", sym));
  v.require(sep >= 0.95, "separated LIS " + fmt("%.3f", sep));

  Rng rng(21);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = 5 + rng.below(20), d = 1 + rng.below(6);
    FeatureMatrix x(rows, d);
    for (auto& e : x.data) e = rng.uniform() * 2 - 1;
    std::vector<int> y(rows);
    for (auto& e : y) e = static_cast<int>(rng.below(2));
    std::vector<double> params(d + 1), grad(d + 1);
    for (auto& e : params) e = rng.uniform() * 4 - 2;
    LogisticRegression::gradient(params, x, y, 1.0, grad);
    for (std::size_t i = 0; i <= d; ++i) {
      auto plus = params, minus = params;
      plus[i] += 1e-6;
      minus[i] -= 1e-6;
      const double numeric =
          (LogisticRegression::objective(plus, x, y, 1.0) - LogisticRegression::objective(minus, x, y, 1.0)) / 2e-6;
      worst = std::max(worst, std::abs(numeric - grad[i]) / std::max(1.0, std::abs(grad[i])));
    }
  }
  v.require(worst < 1e-5, "gradient vs finite differences, max relative error " + fmt("%.2g", worst));
  return v;
}

// ---------------------------------------------------------------- criterion 9

Verdict fixed_schedule() {
  Verdict v;
  AnnealConfig cfg;
  cfg.schedule = AnnealSchedule::kFixed;
  cfg.interval = 10;
  cfg.stop_iteration = 400;
  AnnealScheduler s(cfg);
  std::size_t events = 0;
  for (std::size_t t = 1; t <= 1000; ++t) events += s.after_iteration(t, [] { return 0.5; });
  v.require(events == 40, "scheduler fired " + std::to_string(events) + " times over 1000 iterations");

  SyntheticParams p;
  p.topics = 3;
  p.vocab_per_language = 60;
  p.docs_per_language = 20;
  p.doc_length = 10;
  const auto data = generate_synthetic(p);
  TrainSpec spec;
  spec.kind = ModelKind::kSoftLink;
  spec.hyperparams.topics = 3;
  spec.hyperparams.train_iterations = 450;
  spec.anneal = cfg;
  auto pair = build_transfer_pair(data.corpus, data.dictionary, {0.0, FocusScope::kDocWise});
  spec.transfer_to_side2 = pair.to_side2;
  spec.transfer_to_side1 = pair.to_side1;
  const auto r = train(data.corpus, spec);
  bool on_grid = r.events.size() == 40;
  for (std::size_t i = 0; on_grid && i < r.events.size(); ++i) on_grid = r.events[i].iteration == 10 * (i + 1);
  v.require(on_grid, "450-iteration training logged " + std::to_string(r.events.size()) + " events at 10..400");
  return v;
}

// --------------------------------------------------------------- criterion 10

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "mltm");
  args.insert(args.end(), {"--log-level", "off"});
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return mltm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict determinism_and_round_trip() {
  Verdict v;
  test::TempDir dir("mltm-acceptance");
  const auto d = dir.path();
  bool ok = cli({"synth", "--output-dir", d.string(), "--topics", "4", "--vocab", "120", "--docs", "60",
                 "--doc-length", "30", "--reference-pairs", "200", "--link-fraction", "0.3", "--seed", "3"}) == 0;
  const auto config = (d / "config.json").string();
  for (const char* run : {"a", "b"})
    ok = ok && cli({"train", "--config", config, "--topics", "4", "--iterations", "30", "--anneal", "fixed",
                    "--interval", "10", "--output-dir", (d / run).string()}) == 0;
  v.require(ok, "synth and train commands succeed");
  if (!ok) return v;
  bool identical = true;
  for (const char* f : {"model.json", "anneal_log.jsonl"})
    identical = identical && test::read_file(d / "a" / f) == test::read_file(d / "b" / f);
  v.require(identical, "identical configs give byte-identical model.json and anneal_log.jsonl");

  std::vector<std::string> broken;
  auto check = [&](const std::string& name, bool good) {
    if (!good) broken.push_back(name);
  };
  const auto model = load_model(d / "a" / "model.json");
  check("model", serialize_model(model) + "\n" == test::read_file(d / "a" / "model.json"));
  const auto events = read_anneal_log(d / "a" / "anneal_log.jsonl");
  write_anneal_log(d / "events.jsonl", events);
  check("anneal log", events.size() == 3 && test::read_file(d / "events.jsonl") == test::read_file(d / "a" / "anneal_log.jsonl"));

  const auto run_config = mltm::cli::load_config(d / "config.json");
  check("config", mltm::cli::config_to_json(mltm::cli::config_from_json_text(mltm::cli::config_to_json(run_config))) ==
                      mltm::cli::config_to_json(run_config));
  const auto manifest = nlohmann::json::parse(test::read_file(d / "a" / "manifest.json"));
  check("manifest", manifest["config_hash"] == nlohmann::json::parse(test::read_file(d / "b" / "manifest.json"))["config_hash"]);

  const auto corpus = load_corpus(d / "corpus_l1.jsonl", "l1", run_config.loader_options());
  save_corpus(d / "saved.json", corpus);
  check("saved corpus", read_saved_corpus(d / "saved.json") == corpus);
  write_corpus_jsonl(d / "c.jsonl", corpus);
  LoaderOptions raw;
  raw.remove_top_frequent = 0;
  check("corpus jsonl", load_corpus(d / "c.jsonl", "l1", raw).documents.size() == corpus.documents.size());

  const auto corpus2 = load_corpus(d / "corpus_l2.jsonl", "l2", run_config.loader_options());
  const auto dict = load_dictionary(d / "dictionary.tsv", corpus.vocabulary, corpus2.vocabulary);
  write_dictionary(d / "dict.tsv", dict, corpus.vocabulary, corpus2.vocabulary);
  check("dictionary", load_dictionary(d / "dict.tsv", corpus.vocabulary, corpus2.vocabulary) == dict);

  const auto records = read_reference_records(d / "reference.jsonl");
  write_reference_records(d / "ref.jsonl", records);
  check("reference", test::read_file(d / "ref.jsonl") == test::read_file(d / "reference.jsonl"));

  ok = cli({"transfer-build", "--config", config, "--focus-threshold", "0.5", "--output-dir", (d / "t").string()}) == 0;
  const auto transfer = ok ? read_transfer_tsv(d / "t" / "transfer_l2_from_l1.tsv", corpus2, corpus) : TransferMatrix{};
  if (ok) write_transfer_tsv(d / "again.tsv", transfer, corpus2, corpus);
  check("transfer tsv", ok && read_transfer_tsv(d / "again.tsv", corpus2, corpus) == transfer);

  ok = cli({"infer", "--model", (d / "a" / "model.json").string(), "--corpus", (d / "corpus_l2.jsonl").string(),
            "--side", "2", "--iterations", "20", "--output-dir", (d / "i").string()}) == 0;
  if (ok) {
    const auto theta = load_theta(d / "i" / "theta_l2.json");
    save_theta(d / "theta.json", theta.language, theta.doc_ids, theta.theta, theta.topics);
    check("theta", test::read_file(d / "theta.json") == test::read_file(d / "i" / "theta_l2.json"));
  } else {
    check("infer", false);
  }

  ok = cli({"eval", "--model", (d / "a" / "model.json").string(), "--which", "cnpmi,classify", "--reference",
            (d / "reference.jsonl").string(), "--corpus1", (d / "corpus_l1.jsonl").string(), "--corpus2",
            (d / "corpus_l2.jsonl").string(), "--output-dir", (d / "e").string()}) == 0;
  check("eval report", ok && nlohmann::json::parse(test::read_file(d / "e" / "eval_report.json")).contains("cnpmi_mean"));

  std::string list;
  for (const auto& b : broken) list += " " + b;
  v.require(broken.empty(), broken.empty() ? "every emitted format round-trips" : "round-trip broken:" + list);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "HardLink formulation equivalence", 60, hardlink_equivalence},
      {2, "sampler enumeration oracle", 60, enumeration},
      {3, "model reductions", 0, reductions},
      {4, "transfer matrix oracle", 0, transfer},
      {5, "synthetic recovery", 600, synthetic_recovery},
      {6, "dictionary size trend", 1200, dictionary_trend},
      {7, "CNPMI fixtures", 0, cnpmi_fixtures},
      {8, "LIS fixtures", 0, lis_fixtures},
      {9, "fixed schedule accounting", 0, fixed_schedule},
      {10, "determinism and round trip", 0, determinism_and_round_trip},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0) v.require(secs < c.limit_seconds, "runtime " + fmt("%.1f s", secs) + " under limit " + fmt("%.0f s", c.limit_seconds));
    failures += !v.pass;
    std::printf("criterion %2d %s  %s (%.1f s): %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
