#include "mltm_cli/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mltm/error.hpp"

namespace mltm::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError("unknown config key '" + where + key + "'");
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_path(const json& j, const char* key, std::filesystem::path& out) {
  if (j.contains(key)) out = j.at(key).get<std::string>();
}

json to_json(const RunConfig& c, bool for_hash) {
  const auto& hp = c.hyperparams;
  json j;
  j["model"] = to_string(c.kind);
  j["seed"] = hp.seed;
  j["hyperparams"] = {{"topics", hp.topics},
                      {"alpha", hp.alpha},
                      {"beta", hp.beta},
                      {"beta_root", hp.beta_root},
                      {"beta_internal", hp.beta_internal},
                      {"train_iterations", hp.train_iterations},
                      {"infer_iterations", hp.infer_iterations}};
  j["languages"] = {c.language1, c.language2};
  j["paths"] = {{"corpus1", c.corpus1.string()},
                {"corpus2", c.corpus2.string()},
                {"dictionary", c.dictionary.string()},
                {"stopwords", c.stopwords.string()},
                {"reference", c.reference.string()}};
  j["corpus"] = {{"remove_top_frequent", c.remove_top_frequent}, {"keep_empty", c.keep_empty}};
  j["focus"] = {{"threshold", c.focus.threshold}, {"scope", to_string(c.focus.scope)}};
  j["transfer"] = {{"overlap", to_string(c.overlap)}};
  j["anneal"] = {{"schedule", to_string(c.anneal.schedule)},
                 {"temperature", c.anneal.temperature},
                 {"interval", c.anneal.interval},
                 {"stop_iteration", c.anneal.stop_iteration},
                 {"lis_every", c.anneal.lis_every},
                 {"lis_folds", c.anneal.lis_folds}};
  j["hardlink"] = to_string(c.hardlink);
  j["dictionary_fraction"] = c.dictionary_fraction;
  j["save_counts"] = c.save_counts;
  j["check_invariants"] = c.check_invariants;
  if (!for_hash) {
    j["threads"] = c.threads;
    j["paths"]["output_dir"] = c.output_dir.string();
  }
  return j;
}

}  // namespace

LoaderOptions RunConfig::loader_options() const {
  LoaderOptions options;
  options.remove_top_frequent = remove_top_frequent;
  options.keep_empty = keep_empty;
  if (!stopwords.empty()) options.stopwords = stopwords;
  return options;
}

RunConfig config_from_json_text(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(j,
                   {"model", "seed", "threads", "hyperparams", "languages", "paths", "corpus", "focus", "transfer",
                    "anneal", "hardlink", "dictionary_fraction", "save_counts", "check_invariants"},
                   "");
    if (j.contains("model")) c.kind = parse_model_kind(j.at("model").get<std::string>());
    read(j, "seed", c.hyperparams.seed);
    read(j, "threads", c.threads);
    if (j.contains("hyperparams")) {
      const auto& h = j.at("hyperparams");
      reject_unknown(h,
                     {"topics", "alpha", "beta", "beta_root", "beta_internal", "train_iterations",
                      "infer_iterations"},
                     "hyperparams.");
      read(h, "topics", c.hyperparams.topics);
      read(h, "alpha", c.hyperparams.alpha);
      read(h, "beta", c.hyperparams.beta);
      read(h, "beta_root", c.hyperparams.beta_root);
      read(h, "beta_internal", c.hyperparams.beta_internal);
      read(h, "train_iterations", c.hyperparams.train_iterations);
      read(h, "infer_iterations", c.hyperparams.infer_iterations);
    }
    if (j.contains("languages")) {
      const auto langs = j.at("languages").get<std::vector<std::string>>();
      if (langs.size() != 2) throw ConfigError("'languages' must list exactly two language codes");
      c.language1 = langs[0];
      c.language2 = langs[1];
    }
    if (j.contains("paths")) {
      const auto& p = j.at("paths");
      reject_unknown(p, {"corpus1", "corpus2", "dictionary", "stopwords", "reference", "output_dir"}, "paths.");
      read_path(p, "corpus1", c.corpus1);
      read_path(p, "corpus2", c.corpus2);
      read_path(p, "dictionary", c.dictionary);
      read_path(p, "stopwords", c.stopwords);
      read_path(p, "reference", c.reference);
      read_path(p, "output_dir", c.output_dir);
    }
    if (j.contains("corpus")) {
      const auto& p = j.at("corpus");
      reject_unknown(p, {"remove_top_frequent", "keep_empty"}, "corpus.");
      read(p, "remove_top_frequent", c.remove_top_frequent);
      read(p, "keep_empty", c.keep_empty);
    }
    if (j.contains("focus")) {
      const auto& p = j.at("focus");
      reject_unknown(p, {"threshold", "scope"}, "focus.");
      read(p, "threshold", c.focus.threshold);
      if (p.contains("scope")) c.focus.scope = parse_focus_scope(p.at("scope").get<std::string>());
    }
    if (j.contains("transfer")) {
      const auto& p = j.at("transfer");
      reject_unknown(p, {"overlap"}, "transfer.");
      if (p.contains("overlap")) c.overlap = parse_overlap(p.at("overlap").get<std::string>());
    }
    if (j.contains("anneal")) {
      const auto& p = j.at("anneal");
      reject_unknown(p, {"schedule", "temperature", "interval", "stop_iteration", "lis_every", "lis_folds"},
                     "anneal.");
      if (p.contains("schedule")) c.anneal.schedule = parse_anneal_schedule(p.at("schedule").get<std::string>());
      read(p, "temperature", c.anneal.temperature);
      read(p, "interval", c.anneal.interval);
      read(p, "stop_iteration", c.anneal.stop_iteration);
      read(p, "lis_every", c.anneal.lis_every);
      read(p, "lis_folds", c.anneal.lis_folds);
    }
    if (j.contains("hardlink")) c.hardlink = parse_hardlink(j.at("hardlink").get<std::string>());
    read(j, "dictionary_fraction", c.dictionary_fraction);
    read(j, "save_counts", c.save_counts);
    read(j, "check_invariants", c.check_invariants);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json(const RunConfig& config) { return to_json(config, false).dump(2); }

void validate_for_training(const RunConfig& c) {
  c.hyperparams.validate();
  c.anneal.validate();
  if (!(c.focus.threshold >= 0.0 && c.focus.threshold <= 1.0)) throw ConfigError("focus.threshold must be in [0, 1]");
  if (!(c.dictionary_fraction > 0.0 && c.dictionary_fraction <= 1.0))
    throw ConfigError("dictionary_fraction must be in (0, 1]");
  if (c.language1.empty() || c.language2.empty()) throw ConfigError("'languages' must name both languages");
  if (c.language1 == c.language2) throw ConfigError("the two languages must differ");
  const auto require = [](const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("paths.") + what + " is required");
    if (!std::filesystem::exists(p)) throw ConfigError(std::string("paths.") + what + " does not exist: " + p.string());
  };
  require(c.corpus1, "corpus1");
  require(c.corpus2, "corpus2");
  const bool needs_dictionary = uses_transfer(c.kind) || uses_tree(c.kind) ||
                                c.anneal.schedule == AnnealSchedule::kAdaptive;
  if (needs_dictionary) require(c.dictionary, "dictionary");
  else if (!c.dictionary.empty()) require(c.dictionary, "dictionary");
  if (!c.stopwords.empty()) require(c.stopwords, "stopwords");
  if (c.anneal.schedule != AnnealSchedule::kNone && !uses_transfer(c.kind))
    throw ConfigError("annealing needs a model with soft links");
}

std::uint64_t config_hash(const RunConfig& config) {
  const std::string text = to_json(config, true).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string to_string(OverlapCount mode) { return mode == OverlapCount::kPairs ? "pairs" : "type_intersection"; }

OverlapCount parse_overlap(const std::string& text) {
  if (text == "pairs") return OverlapCount::kPairs;
  if (text == "type_intersection") return OverlapCount::kTypeIntersection;
  throw ConfigError("unknown overlap mode '" + text + "' (expected pairs or type_intersection)");
}

std::string to_string(HardLinkFormulation formulation) {
  return formulation == HardLinkFormulation::kJoint ? "joint" : "conditional";
}

HardLinkFormulation parse_hardlink(const std::string& text) {
  if (text == "conditional") return HardLinkFormulation::kConditional;
  if (text == "joint") return HardLinkFormulation::kJoint;
  throw ConfigError("unknown hardlink formulation '" + text + "'");
}

}  // namespace mltm::cli
