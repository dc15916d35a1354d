#include "mltm_cli/commands.hpp"

#include <fstream>
#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/error.hpp"
#include "mltm/eval.hpp"
#include "mltm/parallel.hpp"
#include "mltm/schedule.hpp"
#include "mltm/trainer.hpp"

namespace mltm::cli {

using nlohmann::json;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text << '\n';
}

void prepare_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
}

json manifest_base(const std::string& command, std::uint64_t seed) {
  return {{"command", command}, {"tool_version", kToolVersion}, {"seed", seed}};
}

BilingualCorpus load_bilingual(const RunConfig& c) {
  const auto options = c.loader_options();
  LoadReport r1, r2;
  auto c1 = load_corpus(c.corpus1, c.language1, options, &r1);
  auto c2 = load_corpus(c.corpus2, c.language2, options, &r2);
  spdlog::info("loaded {} {} documents ({} dropped empty) and {} {} documents ({} dropped empty)", c1.size(),
               c.language1, r1.dropped_empty, c2.size(), c.language2, r2.dropped_empty);
  auto corpus = pair_corpora(std::move(c1), std::move(c2));
  for (const auto& w : corpus.warnings) spdlog::warn("{}", w);
  return corpus;
}

std::optional<BilingualDictionary> load_run_dictionary(const RunConfig& c, const BilingualCorpus& corpus) {
  if (c.dictionary.empty()) return std::nullopt;
  DictionaryLoadReport report;
  auto dict = load_dictionary(c.dictionary, corpus.side1.vocabulary, corpus.side2.vocabulary, &report);
  spdlog::info("dictionary: {} of {} lines kept ({} out of vocabulary, {} multiword, {} duplicates)", report.retained,
               report.lines, report.dropped_out_of_vocabulary, report.dropped_multiword, report.duplicates);
  if (c.dictionary_fraction < 1.0) {
    dict = subsample(dict, c.dictionary_fraction, c.hyperparams.seed);
    spdlog::info("dictionary subsampled to {} concepts", dict.size());
  }
  return dict;
}

std::string transfer_name(const std::string& target, const std::string& source) {
  return "transfer_" + target + "_from_" + source + ".tsv";
}

}  // namespace

void cmd_train(const RunConfig& config, std::ostream& out) {
  validate_for_training(config);
  prepare_dir(config.output_dir);
  const auto corpus = load_bilingual(config);
  const auto dict = load_run_dictionary(config, corpus);

  TrainSpec spec;
  spec.kind = config.kind;
  spec.hyperparams = config.hyperparams;
  spec.dictionary = dict ? &*dict : nullptr;
  spec.anneal = config.anneal;
  spec.hardlink = config.hardlink;
  spec.check_invariants = config.check_invariants;
  if (uses_transfer(config.kind)) {
    auto pair = build_transfer_pair(corpus, *dict, config.focus, config.overlap);
    spdlog::info("transfer matrices: {} and {} nonempty rows", pair.to_side2.nonempty_rows(),
                 pair.to_side1.nonempty_rows());
    spec.transfer_to_side2 = std::move(pair.to_side2);
    spec.transfer_to_side1 = std::move(pair.to_side1);
  }
  const std::size_t report_every = std::max<std::size_t>(1, config.hyperparams.train_iterations / 10);
  spec.on_sweep = [&](std::size_t t, const CountState&) {
    if (t % report_every == 0) spdlog::info("iteration {}/{}", t, config.hyperparams.train_iterations);
  };

  const auto result = train(corpus, spec);
  const auto model_path = config.output_dir / "model.json";
  const auto log_path = config.output_dir / "anneal_log.jsonl";
  save_model(model_path, result.model, config.save_counts);
  write_anneal_log(log_path, result.events);

  auto manifest = manifest_base("train", config.hyperparams.seed);
  manifest["config_hash"] = hex64(config_hash(config));
  manifest["config"] = json::parse(config_to_json(config));
  manifest["model_format_version"] = kModelFormatVersion;
  manifest["anneal_events"] = result.events.size();
  manifest["documents"] = {corpus.side1.size(), corpus.side2.size()};
  manifest["vocabulary"] = {corpus.side1.vocabulary.size(), corpus.side2.vocabulary.size()};
  manifest["hard_links"] = corpus.hard_links.size();
  manifest["dictionary_concepts"] = dict ? dict->size() : 0;
  manifest["warnings"] = corpus.warnings;
  manifest["outputs"] = {"model.json", "anneal_log.jsonl"};
  write_text(config.output_dir / "manifest.json", manifest.dump(2));
  out << "wrote " << model_path.string() << " (" << to_string(config.kind) << ", K=" << config.hyperparams.topics
      << ", " << result.events.size() << " annealing events)\n";
}

void cmd_infer(const InferArgs& args, std::ostream& out) {
  if (args.side != 1 && args.side != 2) throw ConfigError("--side must be 1 or 2");
  const auto model = load_model(args.model);
  const int side = args.side - 1;
  LoadReport report;
  const auto heldout = encode_heldout(args.corpus, model.vocabularies[side], &report);
  if (report.dropped_oov_tokens > 0)
    spdlog::info("dropped {} out-of-vocabulary tokens from {}", report.dropped_oov_tokens, args.corpus.string());
  InferOptions options;
  options.iterations = args.iterations.value_or(model.hyperparams.infer_iterations);
  options.seed = args.seed;
  const auto theta = infer_heldout(model, side, heldout, options);
  prepare_dir(args.output_dir);
  const auto& language = model.vocabularies[side].language();
  std::vector<std::string> ids;
  for (const auto& d : heldout.documents) ids.push_back(d.id);
  const auto path = args.output_dir / ("theta_" + language + ".json");
  save_theta(path, language, ids, theta, model.topics());
  auto manifest = manifest_base("infer", args.seed);
  manifest["model"] = args.model.string();
  manifest["corpus"] = args.corpus.string();
  manifest["iterations"] = options.iterations;
  manifest["outputs"] = {path.filename().string()};
  write_text(args.output_dir / "manifest_infer.json", manifest.dump(2));
  out << "wrote " << path.string() << " (" << ids.size() << " documents)\n";
}

namespace {

Corpus load_labels(const std::filesystem::path& path, const std::string& language) {
  LoaderOptions options;
  options.remove_top_frequent = 0;
  options.keep_empty = true;
  return load_corpus(path, language, options);
}

LabeledThetas thetas_for(const TopicModel& model, int side, const std::filesystem::path& corpus_path,
                         const std::filesystem::path& theta_path) {
  const auto& language = model.vocabularies[side].language();
  const auto corpus = load_labels(corpus_path, language);
  if (theta_path.empty()) return labeled_thetas(model, side, corpus);
  const auto file = load_theta(theta_path);
  if (file.language != language)
    throw DataError("theta file " + theta_path.string() + " is for '" + file.language + "', expected '" + language + "'");
  if (file.topics != model.topics()) throw DataError("theta file topic count differs from the model");
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : corpus.documents) by_id.emplace(d.id, &d);
  LabeledThetas out;
  out.theta = FeatureMatrix(0, file.topics);
  for (std::size_t d = 0; d < file.doc_ids.size(); ++d) {
    const auto it = by_id.find(file.doc_ids[d]);
    if (it == by_id.end()) throw DataError("document '" + file.doc_ids[d] + "' has no labels in " + corpus_path.string());
    out.theta.push_row(std::span<const double>(file.theta.data() + d * file.topics, file.topics));
    out.labels.push_back(it->second->labels);
  }
  return out;
}

}  // namespace

void cmd_eval(const EvalArgs& args, std::ostream& out) {
  const auto model = load_model(args.model);
  EvalReport report;
  report.model_kind = to_string(model.kind);
  report.top_words = args.top_words;
  for (const auto& which : args.which) {
    if (which == "cnpmi") {
      if (args.reference.empty()) throw ConfigError("cnpmi needs --reference");
      if (!std::filesystem::exists(args.reference)) throw ConfigError("reference does not exist: " + args.reference.string());
      const auto ref = load_reference(args.reference, model.vocabularies[0], model.vocabularies[1]);
      for (int side = 0; side < 2; ++side) {
        const auto& docs = side == 0 ? ref.side1 : ref.side2;
        if (std::all_of(docs.begin(), docs.end(), [](const auto& d) { return d.empty(); }))
          throw DataError("reference shares no words with the model's '" + model.vocabularies[side].language() +
                          "' vocabulary");
      }
      report.cnpmi = cnpmi_model(model, ref, args.top_words);
    } else if (which == "classify") {
      if (args.corpus1.empty() || args.corpus2.empty()) throw ConfigError("classify needs --corpus1 and --corpus2");
      const auto t1 = thetas_for(model, 0, args.corpus1, args.theta1);
      const auto t2 = thetas_for(model, 1, args.corpus2, args.theta2);
      ClassifyOptions options;
      options.tune_thresholds = args.tune_thresholds;
      options.seed = args.seed;
      report.classify_1to2 = classify_crosslingual(t1, t2, options);
      report.classify_2to1 = classify_crosslingual(t2, t1, options);
    } else if (which == "lis") {
      if (args.dictionary.empty()) throw ConfigError("lis needs --dictionary");
      const auto dict = load_dictionary(args.dictionary, model.vocabularies[0], model.vocabularies[1]);
      report.lis_final = compute_lis(counts_from_model(model), dict, model.hyperparams.beta, args.lis_folds, args.seed);
    } else {
      throw ConfigError("unknown evaluation '" + which + "' (expected cnpmi, classify or lis)");
    }
  }
  const auto text = report_to_json(report);
  prepare_dir(args.output_dir);
  write_text(args.output_dir / "eval_report.json", text);
  out << text << '\n';
}

void cmd_transfer_build(const RunConfig& config, std::ostream& out) {
  if (config.dictionary.empty()) throw ConfigError("transfer-build needs a dictionary");
  RunConfig checked = config;
  checked.kind = ModelKind::kSoftLink;
  checked.anneal.schedule = AnnealSchedule::kNone;
  validate_for_training(checked);
  prepare_dir(config.output_dir);
  const auto corpus = load_bilingual(config);
  const auto dict = load_run_dictionary(config, corpus);
  const auto pair = build_transfer_pair(corpus, *dict, config.focus, config.overlap);
  const auto name2 = transfer_name(config.language2, config.language1);
  const auto name1 = transfer_name(config.language1, config.language2);
  write_transfer_tsv(config.output_dir / name2, pair.to_side2, corpus.side2, corpus.side1);
  write_transfer_tsv(config.output_dir / name1, pair.to_side1, corpus.side1, corpus.side2);
  auto manifest = manifest_base("transfer-build", config.hyperparams.seed);
  manifest["config_hash"] = hex64(config_hash(config));
  manifest["config"] = json::parse(config_to_json(config));
  manifest["outputs"] = {name2, name1};
  write_text(config.output_dir / "manifest_transfer.json", manifest.dump(2));
  out << "wrote " << name2 << " (" << pair.to_side2.nonzeros() << " entries) and " << name1 << " ("
      << pair.to_side1.nonzeros() << " entries)\n";
}

void cmd_synth(const SynthArgs& args, std::ostream& out) {
  const auto data = generate_synthetic(args.params);
  prepare_dir(args.output_dir);
  write_synthetic(args.output_dir, data, args.reference_pairs, args.params.seed + 1);

  RunConfig config;
  config.kind = ModelKind::kSoftLink;
  config.hyperparams.topics = args.params.topics;
  config.hyperparams.seed = args.params.seed;
  config.language1 = data.corpus.side1.language;
  config.language2 = data.corpus.side2.language;
  config.corpus1 = "corpus_l1.jsonl";
  config.corpus2 = "corpus_l2.jsonl";
  config.dictionary = "dictionary.tsv";
  if (args.reference_pairs > 0) config.reference = "reference.jsonl";
  config.output_dir = "run";
  config.remove_top_frequent = 0;
  write_text(args.output_dir / "config.json", config_to_json(config));

  const auto& p = args.params;
  auto manifest = manifest_base("synth", p.seed);
  manifest["params"] = {{"topics", p.topics},
                        {"vocab_per_language", p.vocab_per_language},
                        {"docs_per_language", p.docs_per_language},
                        {"doc_length", p.doc_length},
                        {"dict_coverage", p.dict_coverage},
                        {"topic_sharpness", p.topic_sharpness},
                        {"leak", p.leak},
                        {"link_fraction", p.link_fraction},
                        {"reference_pairs", args.reference_pairs}};
  manifest["dictionary_concepts"] = data.dictionary.size();
  manifest["outputs"] = {"corpus_l1.jsonl", "corpus_l2.jsonl", "dictionary.tsv", "truth.json", "config.json"};
  if (args.reference_pairs > 0) manifest["outputs"].push_back("reference.jsonl");
  write_text(args.output_dir / "manifest.json", manifest.dump(2));
  out << "wrote synthetic corpora (" << p.docs_per_language << " documents per language, "
      << data.dictionary.size() << " dictionary entries) to " << args.output_dir.string() << '\n';
}

void cmd_inspect(const InspectArgs& args, std::ostream& out) {
  const auto model = load_model(args.model);
  json j;
  j["model_kind"] = to_string(model.kind);
  j["topics"] = model.topics();
  j["provenance"] = {{"seed", model.provenance.seed},
                     {"iterations", model.provenance.iterations},
                     {"schedule", model.provenance.schedule},
                     {"anneal_events", model.provenance.anneal_events}};
  const std::size_t c = args.top_words;
  for (int side = 0; side < 2; ++side) {
    const auto& vocab = model.vocabularies[side];
    json lang;
    lang["language"] = vocab.language();
    lang["vocabulary"] = vocab.size();
    lang["documents"] = model.doc_ids[side].size();
    json topics = json::array();
    for (std::size_t k = 0; k < model.topics(); ++k) {
      std::vector<std::string> words;
      for (WordId w : top_words(model.phi_row(side, k), std::min(c, vocab.size()))) words.push_back(vocab.word(w));
      topics.push_back(words);
    }
    lang["top_words"] = std::move(topics);
    j["languages"].push_back(std::move(lang));
  }
  out << j.dump(2) << '\n';
}

namespace {

struct CommonFlags {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::filesystem::path> output_dir;
  std::string log_level = "info";
};

struct RunOverrides {
  std::optional<std::string> model;
  std::optional<std::size_t> topics;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::size_t> iterations;
  std::optional<std::string> language1;
  std::optional<std::string> language2;
  std::optional<std::filesystem::path> corpus1;
  std::optional<std::filesystem::path> corpus2;
  std::optional<std::filesystem::path> dictionary;
  std::optional<std::filesystem::path> stopwords;
  std::optional<std::size_t> remove_top;
  std::optional<double> focus_threshold;
  std::optional<std::string> focus_scope;
  std::optional<std::string> overlap;
  std::optional<std::string> anneal;
  std::optional<double> temperature;
  std::optional<std::size_t> interval;
  std::optional<std::size_t> stop_iteration;
  std::optional<std::string> hardlink;
  std::optional<double> dictionary_fraction;
  bool no_counts = false;
  bool check_invariants = false;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  app->add_option("--output-dir", f.output_dir, "Directory for outputs");
  app->add_option("--log-level", f.log_level, "trace, debug, info, warn, error, off");
}

void add_run_flags(CLI::App* app, RunOverrides& o) {
  app->add_option("--model", o.model, "lda, hardlink, softlink, voclink, softlink+voclink");
  app->add_option("--topics", o.topics);
  app->add_option("--alpha", o.alpha);
  app->add_option("--beta", o.beta);
  app->add_option("--iterations", o.iterations, "Training sweeps");
  app->add_option("--lang1", o.language1, "First language code");
  app->add_option("--lang2", o.language2, "Second language code");
  app->add_option("--corpus1", o.corpus1);
  app->add_option("--corpus2", o.corpus2);
  app->add_option("--dictionary", o.dictionary);
  app->add_option("--stopwords", o.stopwords);
  app->add_option("--remove-top", o.remove_top, "Most frequent word types to drop");
  app->add_option("--focus-threshold", o.focus_threshold);
  app->add_option("--focus-scope", o.focus_scope, "doc_wise or corpus_wise");
  app->add_option("--overlap", o.overlap, "pairs or type_intersection");
  app->add_option("--anneal", o.anneal, "none, fixed or adaptive");
  app->add_option("--temperature", o.temperature);
  app->add_option("--interval", o.interval);
  app->add_option("--stop-iteration", o.stop_iteration);
  app->add_option("--hardlink", o.hardlink, "conditional or joint");
  app->add_option("--dictionary-fraction", o.dictionary_fraction);
  app->add_flag("--no-counts", o.no_counts, "Omit word-topic counts from the model file");
  app->add_flag("--check-invariants", o.check_invariants, "Verify count tables after every sweep");
}

RunConfig resolve_config(const CommonFlags& f, const RunOverrides& o) {
  RunConfig c = f.config ? load_config(*f.config) : RunConfig{};
  if (f.config) {
    // Relative paths in a config file are relative to the file.
    const auto base = f.config->parent_path();
    for (auto* p : {&c.corpus1, &c.corpus2, &c.dictionary, &c.stopwords, &c.reference, &c.output_dir})
      if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  if (f.seed) c.hyperparams.seed = *f.seed;
  if (f.threads) c.threads = *f.threads;
  if (f.output_dir) c.output_dir = *f.output_dir;
  if (o.model) c.kind = parse_model_kind(*o.model);
  if (o.topics) c.hyperparams.topics = *o.topics;
  if (o.alpha) c.hyperparams.alpha = *o.alpha;
  if (o.beta) c.hyperparams.beta = *o.beta;
  if (o.iterations) c.hyperparams.train_iterations = *o.iterations;
  if (o.language1) c.language1 = *o.language1;
  if (o.language2) c.language2 = *o.language2;
  if (o.corpus1) c.corpus1 = *o.corpus1;
  if (o.corpus2) c.corpus2 = *o.corpus2;
  if (o.dictionary) c.dictionary = *o.dictionary;
  if (o.stopwords) c.stopwords = *o.stopwords;
  if (o.remove_top) c.remove_top_frequent = *o.remove_top;
  if (o.focus_threshold) c.focus.threshold = *o.focus_threshold;
  if (o.focus_scope) c.focus.scope = parse_focus_scope(*o.focus_scope);
  if (o.overlap) c.overlap = parse_overlap(*o.overlap);
  if (o.anneal) c.anneal.schedule = parse_anneal_schedule(*o.anneal);
  if (o.temperature) c.anneal.temperature = *o.temperature;
  if (o.interval) c.anneal.interval = *o.interval;
  if (o.stop_iteration) c.anneal.stop_iteration = *o.stop_iteration;
  if (o.hardlink) c.hardlink = parse_hardlink(*o.hardlink);
  if (o.dictionary_fraction) c.dictionary_fraction = *o.dictionary_fraction;
  if (o.no_counts) c.save_counts = false;
  if (o.check_invariants) c.check_invariants = true;
  return c;
}

void setup_logging(const std::string& level, std::ostream& err) {
  static bool installed = false;
  if (!installed) {
    spdlog::set_default_logger(spdlog::stderr_color_mt("mltm"));
    spdlog::set_pattern("[%l] %v");
    installed = true;
  }
  const auto parsed = spdlog::level::from_str(level);
  if (parsed == spdlog::level::off && level != "off") throw ConfigError("unknown log level '" + level + "'");
  spdlog::set_level(parsed);
  (void)err;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilingual topic models with document, vocabulary and soft links", "mltm"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  CommonFlags common;
  RunOverrides overrides;
  InferArgs infer_args;
  EvalArgs eval_args;
  SynthArgs synth_args;
  InspectArgs inspect_args;
  std::optional<std::size_t> infer_iterations;
  std::string which = "cnpmi";

  auto* train_cmd = app.add_subcommand("train", "Train a topic model");
  add_common(train_cmd, common);
  add_run_flags(train_cmd, overrides);

  auto* transfer_cmd = app.add_subcommand("transfer-build", "Build and dump transfer matrices");
  add_common(transfer_cmd, common);
  add_run_flags(transfer_cmd, overrides);

  auto* infer_cmd = app.add_subcommand("infer", "Infer topic mixtures of held-out documents");
  add_common(infer_cmd, common);
  infer_cmd->add_option("--model", infer_args.model, "Trained model file")->required();
  infer_cmd->add_option("--corpus", infer_args.corpus, "Held-out JSON-lines corpus")->required();
  infer_cmd->add_option("--side", infer_args.side, "Language of the corpus: 1 or 2")->required();
  infer_cmd->add_option("--iterations", infer_iterations, "Gibbs sweeps (default from the model)");

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a trained model");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--model", eval_args.model)->required();
  eval_cmd->add_option("--which", which, "Comma-separated: cnpmi, classify, lis");
  eval_cmd->add_option("--reference", eval_args.reference, "Parallel reference corpus (JSON lines)");
  eval_cmd->add_option("--corpus1", eval_args.corpus1, "Labeled first-language corpus");
  eval_cmd->add_option("--corpus2", eval_args.corpus2, "Labeled second-language corpus");
  eval_cmd->add_option("--theta1", eval_args.theta1, "Inferred first-language thetas");
  eval_cmd->add_option("--theta2", eval_args.theta2, "Inferred second-language thetas");
  eval_cmd->add_option("--dictionary", eval_args.dictionary);
  eval_cmd->add_option("--top-words", eval_args.top_words);
  eval_cmd->add_flag("--tune-thresholds", eval_args.tune_thresholds, "Tune per-label thresholds by cross-validation");
  eval_cmd->add_option("--lis-folds", eval_args.lis_folds);

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic bilingual corpus");
  add_common(synth_cmd, common);
  auto& sp = synth_args.params;
  synth_cmd->add_option("--topics", sp.topics);
  synth_cmd->add_option("--vocab", sp.vocab_per_language, "Words per language");
  synth_cmd->add_option("--docs", sp.docs_per_language, "Documents per language");
  synth_cmd->add_option("--doc-length", sp.doc_length);
  synth_cmd->add_option("--coverage", sp.dict_coverage, "Fraction of words with a dictionary entry");
  synth_cmd->add_option("--sharpness", sp.topic_sharpness, "Inverse Dirichlet concentration of document mixtures");
  synth_cmd->add_option("--leak", sp.leak);
  synth_cmd->add_option("--link-fraction", sp.link_fraction);
  synth_cmd->add_option("--reference-pairs", synth_args.reference_pairs);

  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize a model file");
  add_common(inspect_cmd, common);
  inspect_cmd->add_option("--model", inspect_args.model)->required();
  inspect_cmd->add_option("--top-words", inspect_args.top_words);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigFailure;
  }

  try {
    setup_logging(common.log_level, err);
    if (common.threads) set_max_threads(*common.threads);
    const auto seed = common.seed.value_or(1);
    const auto out_dir = common.output_dir.value_or(".");
    if (train_cmd->parsed() || transfer_cmd->parsed()) {
      const auto config = resolve_config(common, overrides);
      set_max_threads(config.threads);
      if (train_cmd->parsed()) cmd_train(config, out);
      else cmd_transfer_build(config, out);
    } else if (infer_cmd->parsed()) {
      infer_args.iterations = infer_iterations;
      infer_args.seed = seed;
      infer_args.output_dir = out_dir;
      cmd_infer(infer_args, out);
    } else if (eval_cmd->parsed()) {
      eval_args.which.clear();
      std::stringstream ss(which);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) eval_args.which.push_back(item);
      eval_args.seed = seed;
      eval_args.output_dir = out_dir;
      cmd_eval(eval_args, out);
    } else if (synth_cmd->parsed()) {
      sp.seed = seed;
      synth_args.output_dir = out_dir;
      cmd_synth(synth_args, out);
    } else if (inspect_cmd->parsed()) {
      cmd_inspect(inspect_args, out);
    }
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kConfigFailure;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kDataFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalFailure;
  }
  return kOk;
}

}  // namespace mltm::cli
