#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "mltm/corpus.hpp"

namespace mltm {

using ConceptId = std::uint32_t;

/// A translation pair: word1 in the first language, word2 in the second.
struct Concept {
  WordId word1 = 0;
  WordId word2 = 0;

  friend bool operator==(const Concept&, const Concept&) = default;
  friend auto operator<=>(const Concept&, const Concept&) = default;
};

/// Translation pairs indexed by word on both sides.
///
/// Concept ids are positions in concepts(); the per-word indexes list concept
/// ids in ascending order. Duplicate pairs are collapsed on construction.
class BilingualDictionary {
 public:
  BilingualDictionary() = default;
  BilingualDictionary(std::vector<Concept> concepts, std::size_t vocab1_size, std::size_t vocab2_size);

  const std::vector<Concept>& concepts() const { return concepts_; }
  std::size_t size() const { return concepts_.size(); }
  bool empty() const { return concepts_.empty(); }
  const Concept& at(ConceptId c) const { return concepts_.at(c); }

  std::size_t vocab1_size() const { return by_word1_.size(); }
  std::size_t vocab2_size() const { return by_word2_.size(); }
  const std::vector<ConceptId>& concepts_of_word1(WordId w) const { return by_word1_.at(w); }
  const std::vector<ConceptId>& concepts_of_word2(WordId w) const { return by_word2_.at(w); }
  /// side 0 looks up word1, side 1 looks up word2.
  const std::vector<ConceptId>& concepts_of(int side, WordId w) const {
    return side == 0 ? concepts_of_word1(w) : concepts_of_word2(w);
  }

  /// Same concepts with the two languages exchanged.
  BilingualDictionary swapped() const;

  friend bool operator==(const BilingualDictionary& a, const BilingualDictionary& b) {
    return a.concepts_ == b.concepts_ && a.by_word1_.size() == b.by_word1_.size() &&
           a.by_word2_.size() == b.by_word2_.size();
  }

 private:
  std::vector<Concept> concepts_;
  std::vector<std::vector<ConceptId>> by_word1_;
  std::vector<std::vector<ConceptId>> by_word2_;
};

struct DictionaryLoadReport {
  std::size_t lines = 0;
  std::size_t retained = 0;
  std::size_t dropped_out_of_vocabulary = 0;
  std::size_t dropped_multiword = 0;
  std::size_t duplicates = 0;
};

/// Reads "word1<TAB>word2" lines ('#' starts a comment line) and keeps pairs
/// whose words are both in the given vocabularies.
BilingualDictionary load_dictionary(const std::filesystem::path& path, const Vocabulary& v1,
                                    const Vocabulary& v2, DictionaryLoadReport* report = nullptr);

void write_dictionary(const std::filesystem::path& path, const BilingualDictionary& dict,
                      const Vocabulary& v1, const Vocabulary& v2);

/// Keeps ceil(fraction * size) concepts chosen uniformly without replacement.
/// Retained concepts keep their relative order.
BilingualDictionary subsample(const BilingualDictionary& dict, double fraction, std::uint64_t seed);

}  // namespace mltm
