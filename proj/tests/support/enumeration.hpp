#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "mltm/count_state.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/model.hpp"

namespace mltm::test {

/// A tiny bilingual instance small enough to enumerate every (z, leaf) state.
struct TinyInstance {
  ModelKind kind = ModelKind::kLda;
  Hyperparams hp;
  std::array<std::size_t, 2> vocab{1, 1};
  std::array<std::vector<std::vector<WordId>>, 2> docs;
  std::vector<Concept> concepts;
  /// Fixed transfer pseudo-counts per document (K entries) or empty.
  std::array<std::vector<std::vector<double>>, 2> prior;
  /// Document 0 of each side form a linked pair.
  bool linked = false;
};

/// Every instance with two documents, at most four tokens, K = 2 and at most
/// three word types per language, for one model kind and two prior settings.
std::vector<TinyInstance> tiny_instances(ModelKind kind);

/// Log collapsed joint p(w, z, leaves) computed directly from Gamma functions.
/// Linked documents share one document-topic Dirichlet; vocabulary-link
/// models use one two-level tree over both languages.
double log_collapsed_joint(const TinyInstance& inst, const std::array<std::vector<std::vector<TopicId>>, 2>& z,
                           const std::array<std::vector<std::vector<std::size_t>>, 2>& leaf_choice);

struct EnumerationResult {
  std::size_t instances = 0;
  std::size_t comparisons = 0;
  double max_error = 0.0;
};

/// Visits every state of every instance and compares, for each token, the
/// library's conditional against the normalized likelihood ratio over the
/// token's K x leaves completions. HardLink instances check both formulations.
EnumerationResult check_against_enumeration(const std::vector<TinyInstance>& instances);

}  // namespace mltm::test
