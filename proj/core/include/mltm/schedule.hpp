#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "mltm/count_state.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/logistic.hpp"
#include "mltm/transfer.hpp"

namespace mltm {

/// Topic distribution of one word: p(k) ∝ n_{w|k} + beta, uniform if that is all zero.
std::vector<double> concept_topic_distribution(const LanguageCounts& counts, WordId word, double beta);

/// Two rows per concept (first-language word labelled 0, second-language word
/// labelled 1). Rows are emitted in (word1, word2) order regardless of the
/// dictionary's concept order.
struct ConceptFeatures {
  FeatureMatrix x;
  std::vector<int> language;
};
ConceptFeatures concept_features(const CountState& state, const BilingualDictionary& dict, double beta);

/// Language identification score: stratified k-fold accuracy of a logistic
/// classifier predicting a concept word's language from its topic distribution.
double compute_lis(const CountState& state, const BilingualDictionary& dict, double beta, std::size_t folds,
                   std::uint64_t seed);
double compute_lis(const ConceptFeatures& features, std::size_t folds, std::uint64_t seed);

/// LIS values keyed by iteration (1-based).
class LisHistory {
 public:
  explicit LisHistory(std::size_t window = 10) : window_(window) {}

  void record(std::size_t iteration, double lis);
  std::size_t window() const { return window_; }
  const std::vector<std::pair<std::size_t, double>>& values() const { return values_; }
  /// Mean of the values recorded for iterations in (from, to]; nullopt if none.
  std::optional<double> mean(std::size_t from, std::size_t to) const;

 private:
  std::size_t window_;
  std::vector<std::pair<std::size_t, double>> values_;
};

/// True iff mean LIS over (t-I, t] strictly exceeds the mean over (t-2I, t-I].
/// Throws ConfigError when t < 2I or a window holds no values.
bool should_anneal(const LisHistory& history, std::size_t t);

struct AnnealEvent {
  std::size_t iteration = 0;
  AnnealSchedule mode = AnnealSchedule::kNone;
  std::optional<double> lis;
  std::size_t rows_annealed = 0;
  double max_weight_mean = 0.0;

  friend bool operator==(const AnnealEvent&, const AnnealEvent&) = default;
};

/// Decides, after each training iteration, whether the transfer matrices are annealed.
///
/// Fixed: at every multiple of the interval up to stop_iteration.
/// Adaptive: LIS is recorded every `lis_every` iterations; at multiples of the
/// interval from 2I up to stop_iteration, anneal when should_anneal fires.
class AnnealScheduler {
 public:
  explicit AnnealScheduler(AnnealConfig config);

  /// `lis` is called only when the adaptive schedule needs a score.
  bool after_iteration(std::size_t t, const std::function<double()>& lis);
  void log_event(std::size_t t, std::size_t rows_annealed, double max_weight_mean);

  const AnnealConfig& config() const { return config_; }
  const LisHistory& history() const { return history_; }
  const std::vector<AnnealEvent>& events() const { return events_; }

 private:
  AnnealConfig config_;
  LisHistory history_;
  std::vector<AnnealEvent> events_;
  std::optional<double> last_lis_;
};

/// JSON-lines {iteration, mode, lis?, rows_annealed, max_weight_mean}.
void write_anneal_log(const std::filesystem::path& path, const std::vector<AnnealEvent>& events);
std::vector<AnnealEvent> read_anneal_log(const std::filesystem::path& path);

}  // namespace mltm
