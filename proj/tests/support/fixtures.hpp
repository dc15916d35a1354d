#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mltm/corpus.hpp"
#include "mltm/count_state.hpp"
#include "mltm/dictionary.hpp"
#include "mltm/eval.hpp"
#include "mltm/model.hpp"
#include "mltm/rng.hpp"
#include "mltm/transfer.hpp"

namespace mltm::test {

std::filesystem::path data_dir();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "mltm");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

/// Corpus with vocabulary "<lang>0", "<lang>1", ... of size `vocab` and the given token ids.
Corpus make_corpus(const std::string& lang, std::size_t vocab, const std::vector<std::vector<WordId>>& docs);

/// Random documents: lengths uniform in [min_len, max_len], words uniform over `vocab`.
Corpus random_corpus(Rng& rng, const std::string& lang, std::size_t vocab, std::size_t docs, std::size_t min_len,
                     std::size_t max_len);

/// Count tables filled with `tokens` random (doc, word, topic) increments.
LanguageCounts random_counts(Rng& rng, std::size_t docs, std::size_t vocab, std::size_t topics, std::size_t tokens);

/// Uniform random assignments for every token of a bilingual corpus.
std::array<std::vector<std::vector<TopicId>>, 2> random_assignments(Rng& rng, const BilingualCorpus& corpus,
                                                                    std::size_t topics);

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b);

/// Scores every (target, source) pair directly from type sets and the concept
/// list: pairs counts concepts with word1 in the source and word2 in the
/// target; type_intersection is min(matched source types, matched target types).
TransferMatrix brute_force_transfer(const Corpus& target, const Corpus& source, const std::vector<Concept>& concepts,
                                    OverlapCount mode = OverlapCount::kPairs);

/// Mean NPMI over all cross pairs, recounting co-occurrences pair by pair
/// and evaluating log(p12 / (p1 p2)) / -log(p12) directly.
double brute_force_cnpmi(const std::vector<WordId>& words1, const std::vector<WordId>& words2,
                         const ReferenceCorpus& ref);

/// Reference pairs whose sides hold `types` independent uniform word types each.
ReferenceCorpus random_reference(Rng& rng, std::size_t vocab1, std::size_t vocab2, std::size_t pairs,
                                 std::size_t types);

/// K topics over K * c words per language; topic k puts its mass on word block
/// k in both languages. The matching reference has `pairs` pairs, each holding
/// one whole block on both sides, so every top-word cross pair always co-occurs.
struct CoherentFixture {
  TopicModel model;
  ReferenceCorpus reference;
};
CoherentFixture coherent_fixture(std::size_t topics, std::size_t c, std::size_t pairs);

/// Model with Dirichlet(1) random phi rows over the given vocabulary sizes.
TopicModel random_phi_model(Rng& rng, std::size_t topics, std::size_t vocab1, std::size_t vocab2);

}  // namespace mltm::test
