#include "mltm/count_state.hpp"

#include <numeric>
#include <string>

#include "mltm/error.hpp"

namespace mltm {

void Hyperparams::validate() const {
  if (topics < 2) throw ConfigError("number of topics must be at least 2");
  if (!(alpha > 0.0) || !(beta > 0.0) || !(beta_root > 0.0) || !(beta_internal > 0.0))
    throw ConfigError("Dirichlet priors must be positive");
  if (train_iterations == 0 || infer_iterations == 0) throw ConfigError("iteration counts must be positive");
}

LanguageCounts::LanguageCounts(std::size_t docs, std::size_t vocab, std::size_t topics)
    : z(docs),
      docs_(docs),
      vocab_(vocab),
      topics_(topics),
      doc_topic_(docs * topics, 0),
      word_topic_(vocab * topics, 0),
      topic_total_(topics, 0) {}

void LanguageCounts::update(std::size_t doc, WordId word, TopicId topic, Count delta) {
  Count& dk = doc_topic_[doc * topics_ + topic];
  Count& wk = word_topic_[static_cast<std::size_t>(word) * topics_ + topic];
  Count& k = topic_total_[topic];
  dk += delta;
  wk += delta;
  k += delta;
  if (dk < 0 || wk < 0 || k < 0)
    throw InternalError("negative count at doc " + std::to_string(doc) + ", word " + std::to_string(word) +
                        ", topic " + std::to_string(topic));
}

CountState CountState::empty_for(const BilingualCorpus& corpus, std::size_t topics) {
  CountState s;
  for (int side = 0; side < 2; ++side) {
    const auto& c = corpus.side(side);
    s.sides[side] = LanguageCounts(c.documents.size(), c.vocabulary.size(), topics);
    for (std::size_t d = 0; d < c.documents.size(); ++d) s.sides[side].z[d].resize(c.documents[d].tokens.size());
  }
  return s;
}

CountState CountState::from_assignments(const BilingualCorpus& corpus, std::size_t topics,
                                        const std::array<std::vector<std::vector<TopicId>>, 2>& z) {
  CountState s = empty_for(corpus, topics);
  for (int side = 0; side < 2; ++side) {
    const auto& docs = corpus.side(side).documents;
    if (z[side].size() != docs.size()) throw ConfigError("assignment shape does not match the corpus");
    for (std::size_t d = 0; d < docs.size(); ++d) {
      if (z[side][d].size() != docs[d].tokens.size()) throw ConfigError("assignment shape does not match the corpus");
      for (std::size_t i = 0; i < docs[d].tokens.size(); ++i) {
        if (z[side][d][i] >= topics) throw ConfigError("topic assignment out of range");
        s.sides[side].update(d, docs[d].tokens[i], z[side][d][i], +1);
      }
      s.sides[side].z[d] = z[side][d];
    }
  }
  return s;
}

void check_consistency(const LanguageCounts& counts, const Corpus& corpus) {
  LanguageCounts fresh(counts.docs(), counts.vocab(), counts.topics());
  if (counts.z.size() != corpus.documents.size()) throw InternalError("assignment table has wrong document count");
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    if (counts.z[d].size() != tokens.size()) throw InternalError("assignment table has wrong length");
    for (std::size_t i = 0; i < tokens.size(); ++i) fresh.update(d, tokens[i], counts.z[d][i], +1);
    const auto row = counts.doc_topic(d);
    if (std::accumulate(row.begin(), row.end(), Count{0}) != static_cast<Count>(tokens.size()))
      throw InternalError("document " + std::to_string(d) + " topic counts do not sum to its length");
  }
  if (fresh.doc_topic_table() != counts.doc_topic_table() || fresh.word_topic_table() != counts.word_topic_table())
    throw InternalError("count tables do not match the topic assignments");
  for (std::size_t k = 0; k < counts.topics(); ++k) {
    Count sum = 0;
    for (std::size_t w = 0; w < counts.vocab(); ++w) sum += counts.word_topic(static_cast<WordId>(w))[k];
    if (sum != counts.topic_total()[k]) throw InternalError("topic totals do not match word-topic counts");
  }
}

}  // namespace mltm
