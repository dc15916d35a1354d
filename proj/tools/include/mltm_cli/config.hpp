#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mltm/corpus.hpp"
#include "mltm/model.hpp"
#include "mltm/trainer.hpp"
#include "mltm/transfer.hpp"

namespace mltm::cli {

/// Everything a training run depends on. Loaded from a JSON file whose keys
/// mirror the field names below; command-line flags override file values.
///
///   {
///     "model": "softlink",
///     "seed": 1,
///     "threads": 1,
///     "hyperparams": {"topics": 25, "alpha": 0.1, "beta": 0.01, "beta_root": 0.01,
///                     "beta_internal": 100, "train_iterations": 1000, "infer_iterations": 500},
///     "languages": ["en", "de"],
///     "paths": {"corpus1": "...", "corpus2": "...", "dictionary": "...", "stopwords": "...",
///               "reference": "...", "output_dir": "..."},
///     "corpus": {"remove_top_frequent": 100, "keep_empty": false},
///     "focus": {"threshold": 0.0, "scope": "doc_wise"},
///     "transfer": {"overlap": "pairs"},
///     "anneal": {"schedule": "none", "temperature": 0.9, "interval": 10, "stop_iteration": 400,
///                "lis_every": 1, "lis_folds": 5},
///     "hardlink": "conditional",
///     "dictionary_fraction": 1.0,
///     "save_counts": true,
///     "check_invariants": false
///   }
struct RunConfig {
  ModelKind kind = ModelKind::kLda;
  Hyperparams hyperparams;
  std::size_t threads = 1;
  std::string language1;
  std::string language2;
  std::filesystem::path corpus1;
  std::filesystem::path corpus2;
  std::filesystem::path dictionary;
  std::filesystem::path stopwords;
  std::filesystem::path reference;
  std::filesystem::path output_dir = ".";
  std::size_t remove_top_frequent = 100;
  bool keep_empty = false;
  FocusConfig focus;
  OverlapCount overlap = OverlapCount::kPairs;
  AnnealConfig anneal;
  HardLinkFormulation hardlink = HardLinkFormulation::kConditional;
  double dictionary_fraction = 1.0;
  bool save_counts = true;
  bool check_invariants = false;

  LoaderOptions loader_options() const;
};

/// Parses a config file; unknown keys and wrong types are ConfigErrors.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json_text(const std::string& text);
std::string config_to_json(const RunConfig& config);

/// Checks numeric ranges and that every referenced input path exists.
void validate_for_training(const RunConfig& config);

/// FNV-1a 64 of the canonical JSON form, excluding output_dir and threads.
std::uint64_t config_hash(const RunConfig& config);
std::string hex64(std::uint64_t value);

std::string to_string(OverlapCount mode);
OverlapCount parse_overlap(const std::string& text);
std::string to_string(HardLinkFormulation formulation);
HardLinkFormulation parse_hardlink(const std::string& text);

}  // namespace mltm::cli
