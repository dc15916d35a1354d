#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mltm/corpus.hpp"
#include "mltm/dictionary.hpp"

namespace mltm {

struct TransferEntry {
  std::uint32_t source = 0;
  double weight = 0.0;

  friend bool operator==(const TransferEntry&, const TransferEntry&) = default;
};

using TransferRow = std::vector<TransferEntry>;

/// Sparse row-stochastic matrix: one row per target document, a distribution
/// over source documents. Rows are sorted by source index; an empty row means
/// the document receives no transferred topic knowledge.
struct TransferMatrix {
  std::string target_language;
  std::string source_language;
  std::size_t source_count = 0;
  std::vector<TransferRow> rows;

  std::size_t target_count() const { return rows.size(); }
  std::size_t nonzeros() const;
  std::size_t nonempty_rows() const;
  /// Throws InternalError unless every row is empty or sums to 1 within tol.
  void validate(double tol = 1e-9) const;

  friend bool operator==(const TransferMatrix&, const TransferMatrix&) = default;
};

/// How a document pair's dictionary overlap is counted in the score numerator.
enum class OverlapCount {
  /// Every dictionary pair (w1 in source doc, w2 in target doc) counts once.
  kPairs,
  /// min(#source types with a translation present, #target types with one).
  kTypeIntersection,
};

/// Scores each (target, source) document pair by
///   overlap / (|types(source)| + |types(target)|)
/// and normalizes each target row. `dict` must have the source language as its
/// first side and the target language as its second. Only document pairs that
/// share a dictionary pair are visited.
TransferMatrix build_transfer_matrix(const Corpus& target, const Corpus& source, const BilingualDictionary& dict,
                                     OverlapCount mode = OverlapCount::kPairs);

enum class FocusScope { kDocWise, kCorpusWise };

struct FocusConfig {
  double threshold = 0.0;
  FocusScope scope = FocusScope::kDocWise;
};

/// Zeroes weights not strictly greater than threshold * max (row max or matrix
/// max) and renormalizes the survivors.
TransferMatrix static_focus(const TransferMatrix& m, const FocusConfig& cfg);

/// Transfer matrices for both directions of a bilingual corpus, focused with
/// `focus`: to_side2 has second-language rows over first-language documents.
struct TransferPair {
  TransferMatrix to_side2;
  TransferMatrix to_side1;
};
TransferPair build_transfer_pair(const BilingualCorpus& corpus, const BilingualDictionary& dict,
                                 const FocusConfig& focus, OverlapCount mode = OverlapCount::kPairs);

enum class AnnealSchedule { kNone, kFixed, kAdaptive };

/// Dynamic focusing: how and when transfer matrices are sharpened during training.
struct AnnealConfig {
  AnnealSchedule schedule = AnnealSchedule::kNone;
  double temperature = 0.9;
  std::size_t interval = 10;
  /// No annealing after this iteration, for either schedule.
  std::size_t stop_iteration = 400;
  /// Adaptive schedule: compute the language identification score every this many iterations.
  std::size_t lis_every = 1;
  std::size_t lis_folds = 5;

  void validate() const;
};

std::string to_string(AnnealSchedule schedule);
AnnealSchedule parse_anneal_schedule(const std::string& text);

/// Raises every weight to the power 1/temperature and renormalizes each row.
TransferMatrix anneal_matrix(const TransferMatrix& m, double temperature);

/// Mean over nonempty rows of the row's largest weight (0 if all rows are empty).
double mean_row_max(const TransferMatrix& m);

/// TSV dump "target_id<TAB>source_id<TAB>weight", rows in target order and
/// entries by descending weight (ties by source index).
void write_transfer_tsv(const std::filesystem::path& path, const TransferMatrix& m, const Corpus& target,
                        const Corpus& source);
TransferMatrix read_transfer_tsv(const std::filesystem::path& path, const Corpus& target, const Corpus& source);

std::string to_string(FocusScope scope);
FocusScope parse_focus_scope(const std::string& text);

}  // namespace mltm
