#include "mltm/conditionals.hpp"

#include <cmath>
#include <string>

#include "mltm/error.hpp"

namespace mltm {

namespace detail {

void flat_weights(std::span<const Count> doc_topic, std::span<const double> prior, const LanguageCounts& counts,
                  WordId word, const Hyperparams& hp, std::span<double> out) {
  const std::size_t K = counts.topics();
  const auto wk = counts.word_topic(word);
  const auto nk = counts.topic_total();
  const double vbeta = static_cast<double>(counts.vocab()) * hp.beta;
  for (std::size_t k = 0; k < K; ++k) {
    double doc_term = static_cast<double>(doc_topic[k]);
    if (!prior.empty()) doc_term += prior[k];
    doc_term += hp.alpha;
    out[k] = doc_term * (static_cast<double>(wk[k]) + hp.beta) / (static_cast<double>(nk[k]) + vbeta);
  }
}

void tree_weights(std::span<const Count> doc_topic, std::span<const double> prior, const DirichletTree& tree,
                  int side, WordId word, const Hyperparams& hp, std::span<double> out) {
  const auto leaves = tree.leaves_of(side, word);
  const std::size_t K = tree.topics();
  for (std::size_t k = 0; k < K; ++k) {
    double doc_term = static_cast<double>(doc_topic[k]);
    if (!prior.empty()) doc_term += prior[k];
    doc_term += hp.alpha;
    for (std::size_t j = 0; j < leaves.size(); ++j)
      out[k * leaves.size() + j] = doc_term * tree.path_weight(leaves[j], static_cast<TopicId>(k));
  }
}

std::size_t sample_index(std::span<const double> weights, double uniform) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total)) throw InternalError("sampler weights are not a valid distribution");
  const double target = uniform * total;
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (target < cumulative) return i;
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i-- > 0;)
    if (weights[i] > 0.0) return i;
  return weights.size() - 1;
}

void normalize(std::span<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InternalError("negative or non-finite conditional weight");
    total += w;
  }
  if (!(total > 0.0)) throw InternalError("conditional weights sum to zero");
  for (double& w : weights) w /= total;
}

}  // namespace detail

namespace {

void check_doc(const LanguageCounts& counts, std::size_t doc, WordId word) {
  if (doc >= counts.docs() || word >= counts.vocab()) throw InternalError("token index out of range");
}

}  // namespace

void lda_conditional(const LanguageCounts& counts, std::size_t doc, WordId word, const Hyperparams& hp,
                     std::span<double> out) {
  check_doc(counts, doc, word);
  detail::flat_weights(counts.doc_topic(doc), {}, counts, word, hp, out);
  detail::normalize(out);
}

std::vector<double> lda_conditional(const LanguageCounts& counts, std::size_t doc, WordId word, const Hyperparams& hp) {
  std::vector<double> out(counts.topics());
  lda_conditional(counts, doc, word, hp, out);
  return out;
}

void hardlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                          std::span<const Count> partner_counts, const Hyperparams& hp, std::span<double> out) {
  check_doc(counts, doc, word);
  if (partner_counts.size() != counts.topics()) throw InternalError("partner count vector has wrong length");
  std::vector<double> prior(partner_counts.begin(), partner_counts.end());
  detail::flat_weights(counts.doc_topic(doc), prior, counts, word, hp, out);
  detail::normalize(out);
}

std::vector<double> hardlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                                         std::span<const Count> partner_counts, const Hyperparams& hp) {
  std::vector<double> out(counts.topics());
  hardlink_conditional(counts, doc, word, partner_counts, hp, out);
  return out;
}

void hardlink_joint_conditional(std::span<const Count> pooled_doc_topic, const LanguageCounts& counts, WordId word,
                                const Hyperparams& hp, std::span<double> out) {
  if (word >= counts.vocab()) throw InternalError("token index out of range");
  detail::flat_weights(pooled_doc_topic, {}, counts, word, hp, out);
  detail::normalize(out);
}

std::vector<double> softlink_prior(const TransferRow& row, std::span<const Count> source_doc_topic,
                                   std::size_t topics) {
  std::vector<double> prior(topics, 0.0);
  for (const auto& e : row) {
    const std::size_t base = static_cast<std::size_t>(e.source) * topics;
    if (base + topics > source_doc_topic.size())
      throw InternalError("transfer entry refers to source document " + std::to_string(e.source) +
                          " outside the count table");
    for (std::size_t k = 0; k < topics; ++k) prior[k] += e.weight * static_cast<double>(source_doc_topic[base + k]);
  }
  return prior;
}

void softlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                          std::span<const double> prior_pseudo, const Hyperparams& hp, std::span<double> out) {
  check_doc(counts, doc, word);
  if (prior_pseudo.size() != counts.topics()) throw InternalError("prior vector has wrong length");
  detail::flat_weights(counts.doc_topic(doc), prior_pseudo, counts, word, hp, out);
  detail::normalize(out);
}

std::vector<double> softlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                                         std::span<const double> prior_pseudo, const Hyperparams& hp) {
  std::vector<double> out(counts.topics());
  softlink_conditional(counts, doc, word, prior_pseudo, hp, out);
  return out;
}

void voclink_conditional(const LanguageCounts& counts, const DirichletTree& tree, int side, std::size_t doc,
                         WordId word, const Hyperparams& hp, std::span<double> out, std::span<const double> prior) {
  check_doc(counts, doc, word);
  if (tree.topics() != counts.topics()) throw InternalError("tree and count tables disagree on K");
  if (!prior.empty() && prior.size() != counts.topics()) throw InternalError("prior vector has wrong length");
  const std::size_t K = counts.topics();
  const std::size_t leaves = tree.leaves_of(side, word).size();
  if (leaves == 0) throw InternalError("word has no leaf in the Dirichlet tree");
  std::vector<double> joint(K * leaves);
  detail::tree_weights(counts.doc_topic(doc), prior, tree, side, word, hp, joint);
  for (std::size_t k = 0; k < K; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < leaves; ++j) sum += joint[k * leaves + j];
    out[k] = sum;
  }
  detail::normalize(out);
}

std::vector<double> voclink_conditional(const LanguageCounts& counts, const DirichletTree& tree, int side,
                                        std::size_t doc, WordId word, const Hyperparams& hp,
                                        std::span<const double> prior) {
  std::vector<double> out(counts.topics());
  voclink_conditional(counts, tree, side, doc, word, hp, out, prior);
  return out;
}

}  // namespace mltm
