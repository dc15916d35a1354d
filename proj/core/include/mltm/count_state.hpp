#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mltm/corpus.hpp"

namespace mltm {

using TopicId = std::uint32_t;
using Count = std::int32_t;

/// Dirichlet priors and run lengths shared by every model kind.
struct Hyperparams {
  std::size_t topics = 25;
  double alpha = 0.1;
  double beta = 0.01;
  /// Dirichlet tree: root -> concept node edges.
  double beta_root = 0.01;
  /// Dirichlet tree: concept node -> leaf edges.
  double beta_internal = 100.0;
  std::size_t train_iterations = 1000;
  std::size_t infer_iterations = 500;
  std::uint64_t seed = 1;

  /// Throws ConfigError on non-positive priors or fewer than two topics.
  void validate() const;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

/// Collapsed-sampler tallies for one language: n_{k|d}, n_{w|k}, n_{.|k} and z.
class LanguageCounts {
 public:
  LanguageCounts() = default;
  LanguageCounts(std::size_t docs, std::size_t vocab, std::size_t topics);

  std::size_t topics() const { return topics_; }
  std::size_t docs() const { return docs_; }
  std::size_t vocab() const { return vocab_; }

  std::span<const Count> doc_topic(std::size_t d) const { return {doc_topic_.data() + d * topics_, topics_}; }
  std::span<const Count> word_topic(WordId w) const { return {word_topic_.data() + w * topics_, topics_}; }
  std::span<const Count> topic_total() const { return topic_total_; }
  /// D x K, row-major; the snapshot source for transfer priors.
  const std::vector<Count>& doc_topic_table() const { return doc_topic_; }
  const std::vector<Count>& word_topic_table() const { return word_topic_; }

  /// Adds `delta` to the three tables for one token; throws InternalError if a count goes negative.
  void update(std::size_t doc, WordId word, TopicId topic, Count delta);

  std::vector<std::vector<TopicId>> z;

  friend bool operator==(const LanguageCounts&, const LanguageCounts&) = default;

 private:
  std::size_t docs_ = 0;
  std::size_t vocab_ = 0;
  std::size_t topics_ = 0;
  std::vector<Count> doc_topic_;
  std::vector<Count> word_topic_;
  std::vector<Count> topic_total_;
};

/// Count tables for both languages of a bilingual corpus.
struct CountState {
  std::array<LanguageCounts, 2> sides;

  static CountState empty_for(const BilingualCorpus& corpus, std::size_t topics);
  /// Builds tallies from explicit assignments z[side][doc][pos].
  static CountState from_assignments(const BilingualCorpus& corpus, std::size_t topics,
                                     const std::array<std::vector<std::vector<TopicId>>, 2>& z);

  friend bool operator==(const CountState&, const CountState&) = default;
};

/// Tallies `counts.z` from scratch against `corpus` and compares with the
/// stored tables; throws InternalError on any mismatch or negative entry.
void check_consistency(const LanguageCounts& counts, const Corpus& corpus);

}  // namespace mltm
