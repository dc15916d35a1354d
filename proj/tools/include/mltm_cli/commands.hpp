#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mltm/synthetic.hpp"
#include "mltm_cli/config.hpp"

namespace mltm::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kInternalFailure = 1, kConfigFailure = 2, kDataFailure = 3 };

/// Writes model.json, anneal_log.jsonl and manifest.json into config.output_dir.
void cmd_train(const RunConfig& config, std::ostream& out);

struct InferArgs {
  std::filesystem::path model;
  std::filesystem::path corpus;
  int side = 1;  // 1 or 2
  std::optional<std::size_t> iterations;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
};
/// Writes theta_<language>.json.
void cmd_infer(const InferArgs& args, std::ostream& out);

struct EvalArgs {
  std::filesystem::path model;
  std::vector<std::string> which{"cnpmi"};
  std::filesystem::path reference;
  std::filesystem::path corpus1;  // labels for classification
  std::filesystem::path corpus2;
  std::filesystem::path theta1;  // optional inferred thetas replacing the model's
  std::filesystem::path theta2;
  std::filesystem::path dictionary;
  std::size_t top_words = 20;
  bool tune_thresholds = false;
  std::size_t lis_folds = 5;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
};
/// Prints the report and writes eval_report.json.
void cmd_eval(const EvalArgs& args, std::ostream& out);

/// Writes transfer_<l2>_from_<l1>.tsv and transfer_<l1>_from_<l2>.tsv.
void cmd_transfer_build(const RunConfig& config, std::ostream& out);

struct SynthArgs {
  SyntheticParams params;
  std::size_t reference_pairs = 1000;
  std::filesystem::path output_dir = ".";
};
/// Writes the generator outputs, a training config.json and manifest.json.
void cmd_synth(const SynthArgs& args, std::ostream& out);

struct InspectArgs {
  std::filesystem::path model;
  std::size_t top_words = 10;
};
void cmd_inspect(const InspectArgs& args, std::ostream& out);

/// Parses argv, dispatches, and maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mltm::cli
