#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mltm/corpus.hpp"
#include "mltm/count_state.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/dirichlet_tree.hpp"
#include "mltm/model.hpp"
#include "mltm/schedule.hpp"
#include "mltm/transfer.hpp"

namespace mltm {

/// How HardLink couples a linked pair while sampling. Both give identical
/// conditionals; the joint form keeps one pooled count vector per pair.
enum class HardLinkFormulation { kConditional, kJoint };

struct TrainSpec {
  ModelKind kind = ModelKind::kLda;
  Hyperparams hyperparams;
  /// Rows are second-language documents over first-language documents.
  std::optional<TransferMatrix> transfer_to_side2;
  /// Rows are first-language documents over second-language documents.
  std::optional<TransferMatrix> transfer_to_side1;
  /// Required for vocabulary links and for the adaptive schedule.
  const BilingualDictionary* dictionary = nullptr;
  AnnealConfig anneal;
  HardLinkFormulation hardlink = HardLinkFormulation::kConditional;
  /// Verify count tables against z after every sweep.
  bool check_invariants = false;
  /// Called after every sweep with the 1-based iteration and the state.
  std::function<void(std::size_t, const CountState&)> on_sweep;
};

struct TrainResult {
  TopicModel model;
  CountState state;
  std::vector<AnnealEvent> events;
  std::optional<TransferMatrix> transfer_to_side2;
  std::optional<TransferMatrix> transfer_to_side1;
};

/// Seeded random initialization followed by `train_iterations` collapsed Gibbs
/// sweeps. A sweep visits first-language documents in corpus order, then
/// second-language documents; tokens in document order. Transfer priors are
/// recomputed from both languages' document-topic counts at the start of each
/// sweep. Annealing, when configured, runs after a sweep.
TrainResult train(const BilingualCorpus& corpus, const TrainSpec& spec);

struct InferOptions {
  std::size_t iterations = 500;
  std::uint64_t seed = 1;
};

/// Gibbs sampling of held-out topic assignments with phi fixed and a symmetric
/// alpha prior. Returns D x K posterior-mean theta (row-major).
std::vector<double> infer_heldout(const TopicModel& model, int side, const Corpus& heldout,
                                  const InferOptions& options);

}  // namespace mltm
