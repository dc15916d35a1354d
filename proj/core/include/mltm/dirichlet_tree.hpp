#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mltm/count_state.hpp"
#include "mltm/dictionary.hpp"

namespace mltm {

using LeafId = std::uint32_t;

/// Two-level Dirichlet tree shared by both languages, with per-topic counts.
///
/// The root's children are one internal node per dictionary concept plus one
/// leaf for every word (of either language) that belongs to no concept. Each
/// concept node has two leaves: its first-language word and its
/// second-language word. A word in several concepts has one leaf per concept.
///
/// Edge priors: root -> concept uses beta_root, root -> untranslated leaf uses
/// beta, concept -> leaf uses beta_internal. The probability of reaching a
/// leaf under topic k is the product over its edges of
///   (n_child,k + prior_child) / (n_parent,k + sum of the parent's child priors).
class DirichletTree {
 public:
  static constexpr std::int32_t kRoot = -1;

  struct Leaf {
    int side = 0;
    WordId word = 0;
    std::int32_t concept_node = kRoot;  // kRoot for words without translations
  };

  DirichletTree() = default;
  DirichletTree(const BilingualDictionary& dict, std::size_t topics, double beta, double beta_root,
                double beta_internal);

  std::size_t topics() const { return topics_; }
  std::size_t concept_count() const { return concept_count_; }
  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t root_leaf_count() const { return root_leaves_; }
  const Leaf& leaf(LeafId id) const { return leaves_[id]; }
  std::span<const LeafId> leaves_of(int side, WordId word) const;

  /// Moves one token on `leaf` in or out of topic k along the whole path.
  void update(LeafId leaf, TopicId k, Count delta);

  /// Path probability of `leaf` under topic k given the current counts.
  double path_weight(LeafId leaf, TopicId k) const {
    const Leaf& l = leaves_[leaf];
    const double root_den = static_cast<double>(root_count_[k]) + root_prior_sum_;
    if (l.concept_node == kRoot)
      return (static_cast<double>(leaf_count_[leaf * topics_ + k]) + beta_) / root_den;
    const double node = static_cast<double>(concept_count_table_[static_cast<std::size_t>(l.concept_node) * topics_ + k]);
    return (node + beta_root_) / root_den * (static_cast<double>(leaf_count_[leaf * topics_ + k]) + beta_internal_) /
           (node + 2.0 * beta_internal_);
  }

  Count leaf_topic_count(LeafId leaf, TopicId k) const { return leaf_count_[leaf * topics_ + k]; }
  Count concept_topic_count(std::size_t c, TopicId k) const { return concept_count_table_[c * topics_ + k]; }
  Count root_topic_count(TopicId k) const { return root_count_[k]; }
  double root_prior_sum() const { return root_prior_sum_; }

  /// Checks node counts against the sum of their children; throws InternalError.
  void check_consistency() const;

  /// Per-language word distribution of topic k: leaf path weights summed per
  /// word of `side` and renormalized over that language's vocabulary.
  std::vector<double> language_word_distribution(int side, TopicId k) const;

 private:
  std::size_t topics_ = 0;
  std::size_t concept_count_ = 0;
  std::size_t root_leaves_ = 0;
  double beta_ = 0.0;
  double beta_root_ = 0.0;
  double beta_internal_ = 0.0;
  double root_prior_sum_ = 0.0;
  std::vector<Leaf> leaves_;
  // CSR index: leaves of (side, word).
  std::array<std::vector<std::uint32_t>, 2> offsets_;
  std::array<std::vector<LeafId>, 2> word_leaves_;
  std::vector<Count> leaf_count_;
  std::vector<Count> concept_count_table_;
  std::vector<Count> root_count_;
};

}  // namespace mltm
