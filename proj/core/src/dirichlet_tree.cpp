#include "mltm/dirichlet_tree.hpp"

#include <string>

#include "mltm/error.hpp"

namespace mltm {

DirichletTree::DirichletTree(const BilingualDictionary& dict, std::size_t topics, double beta, double beta_root,
                             double beta_internal)
    : topics_(topics),
      concept_count_(dict.size()),
      beta_(beta),
      beta_root_(beta_root),
      beta_internal_(beta_internal) {
  const std::array<std::size_t, 2> vocab{dict.vocab1_size(), dict.vocab2_size()};
  for (int side = 0; side < 2; ++side) {
    auto& offsets = offsets_[side];
    offsets.assign(vocab[side] + 1, 0);
    for (std::size_t w = 0; w < vocab[side]; ++w) {
      const auto& concepts = dict.concepts_of(side, static_cast<WordId>(w));
      offsets[w] = static_cast<std::uint32_t>(word_leaves_[side].size());
      if (concepts.empty()) {
        word_leaves_[side].push_back(static_cast<LeafId>(leaves_.size()));
        leaves_.push_back({side, static_cast<WordId>(w), kRoot});
        ++root_leaves_;
      } else {
        for (ConceptId c : concepts) {
          word_leaves_[side].push_back(static_cast<LeafId>(leaves_.size()));
          leaves_.push_back({side, static_cast<WordId>(w), static_cast<std::int32_t>(c)});
        }
      }
    }
    offsets[vocab[side]] = static_cast<std::uint32_t>(word_leaves_[side].size());
  }
  root_prior_sum_ = static_cast<double>(concept_count_) * beta_root_ + static_cast<double>(root_leaves_) * beta_;
  leaf_count_.assign(leaves_.size() * topics_, 0);
  concept_count_table_.assign(concept_count_ * topics_, 0);
  root_count_.assign(topics_, 0);
}

std::span<const LeafId> DirichletTree::leaves_of(int side, WordId word) const {
  const auto& offsets = offsets_[side];
  return {word_leaves_[side].data() + offsets[word], offsets[word + 1] - offsets[word]};
}

void DirichletTree::update(LeafId leaf, TopicId k, Count delta) {
  Count& lc = leaf_count_[leaf * topics_ + k];
  lc += delta;
  bool negative = lc < 0;
  if (const auto c = leaves_[leaf].concept_node; c != kRoot) {
    Count& cc = concept_count_table_[static_cast<std::size_t>(c) * topics_ + k];
    cc += delta;
    negative = negative || cc < 0;
  }
  root_count_[k] += delta;
  if (negative || root_count_[k] < 0) throw InternalError("negative Dirichlet tree count at leaf " + std::to_string(leaf));
}

void DirichletTree::check_consistency() const {
  std::vector<Count> concept_sum(concept_count_ * topics_, 0);
  std::vector<Count> root_sum(topics_, 0);
  for (std::size_t l = 0; l < leaves_.size(); ++l) {
    for (std::size_t k = 0; k < topics_; ++k) {
      const Count n = leaf_count_[l * topics_ + k];
      if (n < 0) throw InternalError("negative leaf count");
      root_sum[k] += n;
      if (leaves_[l].concept_node != kRoot) concept_sum[static_cast<std::size_t>(leaves_[l].concept_node) * topics_ + k] += n;
    }
  }
  if (concept_sum != concept_count_table_) throw InternalError("concept node counts differ from their leaves");
  if (root_sum != root_count_) throw InternalError("root counts differ from their children");
}

std::vector<double> DirichletTree::language_word_distribution(int side, TopicId k) const {
  const std::size_t vocab = offsets_[side].size() - 1;
  std::vector<double> p(vocab, 0.0);
  double sum = 0.0;
  for (std::size_t w = 0; w < vocab; ++w) {
    for (LeafId l : leaves_of(side, static_cast<WordId>(w))) p[w] += path_weight(l, k);
    sum += p[w];
  }
  for (auto& x : p) x /= sum;
  return p;
}

}  // namespace mltm
