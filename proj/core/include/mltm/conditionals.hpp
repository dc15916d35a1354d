#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mltm/count_state.hpp"
#include "mltm/dirichlet_tree.hpp"
#include "mltm/transfer.hpp"

namespace mltm {

// Per-token collapsed conditionals p(z = k | everything else).
//
// Every function expects the token being resampled to be already removed from
// all count tables, writes a normalized distribution over the K topics into
// `out`, and throws InternalError if a weight is negative or non-finite.
// The samplers use the same arithmetic, so these are the exact distributions
// the training loop draws from.

/// p(k) ∝ (n_{k|d} + α)(n_{w|k} + β)/(n_{.|k} + Vβ).
void lda_conditional(const LanguageCounts& counts, std::size_t doc, WordId word, const Hyperparams& hp,
                     std::span<double> out);
std::vector<double> lda_conditional(const LanguageCounts& counts, std::size_t doc, WordId word, const Hyperparams& hp);

/// Conditional formulation of document links: the linked partner's topic
/// counts join the prior, p(k) ∝ (n_{k|d} + partner_k + α) · word term.
void hardlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                          std::span<const Count> partner_counts, const Hyperparams& hp, std::span<double> out);
std::vector<double> hardlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                                         std::span<const Count> partner_counts, const Hyperparams& hp);

/// Joint formulation of document links: the linked tuple owns one pooled
/// topic-count vector, p(k) ∝ (pooled_k + α) · word term.
void hardlink_joint_conditional(std::span<const Count> pooled_doc_topic, const LanguageCounts& counts, WordId word,
                                const Hyperparams& hp, std::span<double> out);

/// Transferred pseudo-counts Σ_s weight(s) · N[s][·] for one target document;
/// `source_doc_topic` is the source corpus's D x K table (row-major).
std::vector<double> softlink_prior(const TransferRow& row, std::span<const Count> source_doc_topic,
                                   std::size_t topics);

/// p(k) ∝ (n_{k|d} + prior_k + α) · word term.
void softlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                          std::span<const double> prior_pseudo, const Hyperparams& hp, std::span<double> out);
std::vector<double> softlink_conditional(const LanguageCounts& counts, std::size_t doc, WordId word,
                                         std::span<const double> prior_pseudo, const Hyperparams& hp);

/// Word term from the Dirichlet tree, summed over the word's leaves. `prior`
/// may be empty (vocabulary links only) or hold transfer pseudo-counts.
void voclink_conditional(const LanguageCounts& counts, const DirichletTree& tree, int side, std::size_t doc,
                         WordId word, const Hyperparams& hp, std::span<double> out,
                         std::span<const double> prior = {});
std::vector<double> voclink_conditional(const LanguageCounts& counts, const DirichletTree& tree, int side,
                                        std::size_t doc, WordId word, const Hyperparams& hp,
                                        std::span<const double> prior = {});

namespace detail {

/// Unnormalized flat-vocabulary weights; `doc_topic` is the document's (or
/// pooled tuple's) counts and `prior` is empty or K pseudo-counts.
void flat_weights(std::span<const Count> doc_topic, std::span<const double> prior, const LanguageCounts& counts,
                  WordId word, const Hyperparams& hp, std::span<double> out);

/// Unnormalized (topic, leaf) weights, laid out out[k * leaves + j] for the
/// word's j-th leaf.
void tree_weights(std::span<const Count> doc_topic, std::span<const double> prior, const DirichletTree& tree,
                  int side, WordId word, const Hyperparams& hp, std::span<double> out);

/// Draws an index proportional to `weights` with one uniform variate.
std::size_t sample_index(std::span<const double> weights, double uniform);

void normalize(std::span<double> weights);

}  // namespace detail

}  // namespace mltm
