#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mltm/corpus.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/eval.hpp"

namespace mltm {

/// Parameters of the synthetic bilingual generator.
///
/// Topic k owns a block of V/K words in each language. Within a block, word
/// weights are drawn from a flat Dirichlet; every other word gets a small
/// `leak` share. The second language's word sigma(i) has exactly the
/// probabilities of first-language word i under every topic, and the
/// dictionary lists a random subset of the pairs (i, sigma(i)).
/// Document topic mixtures are Dirichlet(1 / topic_sharpness); above 1e6 each
/// document uses a single uniformly chosen topic.
struct SyntheticParams {
  std::size_t topics = 5;
  std::size_t vocab_per_language = 500;
  std::size_t docs_per_language = 200;
  std::size_t doc_length = 50;
  double dict_coverage = 0.3;
  double topic_sharpness = 100.0;
  double leak = 0.02;
  /// Fraction of first-language documents with a linked second-language
  /// partner sharing the same topic mixture.
  double link_fraction = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SyntheticData {
  SyntheticParams params;
  /// Vocabularies hold all V words of each language in generator order.
  BilingualCorpus corpus;
  BilingualDictionary dictionary;
  /// Ground truth, K x V per language.
  std::array<std::vector<double>, 2> phi;
  /// Ground truth, D x K per language.
  std::array<std::vector<double>, 2> theta;
  /// Argmax topic per document; also stored as the label "topic_<k>".
  std::array<std::vector<std::size_t>, 2> labels;
  /// translation[i] = second-language id paired with first-language word i.
  std::vector<WordId> translation;
};

SyntheticData generate_synthetic(const SyntheticParams& params);

/// Parallel reference pairs drawn from the same topics: each pair shares one
/// topic mixture and holds doc_length tokens per side, reduced to types.
std::vector<ReferenceRecord> generate_reference(const SyntheticData& data, std::size_t pairs, std::uint64_t seed);

/// Writes corpus_l1.jsonl, corpus_l2.jsonl, dictionary.tsv, truth.json and
/// (when pairs > 0) reference.jsonl into `dir`.
void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data, std::size_t reference_pairs = 0,
                     std::uint64_t reference_seed = 0);

}  // namespace mltm
