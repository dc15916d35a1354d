#include "mltm/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "mltm/conditionals.hpp"
#include "mltm/error.hpp"
#include "mltm/parallel.hpp"
#include "mltm/rng.hpp"

namespace mltm {

namespace {

constexpr std::int64_t kNoPartner = -1;

class GibbsChain {
 public:
  GibbsChain(const BilingualCorpus& corpus, const TrainSpec& spec)
      : corpus_(corpus), spec_(spec), hp_(spec.hyperparams), K_(hp_.topics) {
    validate();
    state_ = CountState::empty_for(corpus_, K_);
    transfer_to_side2_ = spec.transfer_to_side2;
    transfer_to_side1_ = spec.transfer_to_side1;
    if (uses_tree(spec.kind)) {
      tree_.emplace(*spec.dictionary, K_, hp_.beta, hp_.beta_root, hp_.beta_internal);
    }
    if (spec.kind == ModelKind::kHardLink) setup_links();
    for (int side = 0; side < 2; ++side) {
      const auto& docs = corpus_.side(side).documents;
      rngs_[side].reserve(docs.size());
      for (std::size_t d = 0; d < docs.size(); ++d) rngs_[side].push_back(Rng::stream(hp_.seed, document_stream(side, d)));
      priors_[side].assign(docs.size() * K_, 0.0);
      if (tree_) {
        leaf_of_token_[side].resize(docs.size());
        for (std::size_t d = 0; d < docs.size(); ++d) leaf_of_token_[side][d].resize(docs[d].tokens.size());
      }
    }
    initialize();
  }

  TrainResult run() {
    std::optional<AnnealScheduler> scheduler;
    if (spec_.anneal.schedule != AnnealSchedule::kNone) scheduler.emplace(spec_.anneal);

    for (std::size_t t = 1; t <= hp_.train_iterations; ++t) {
      if (uses_transfer(spec_.kind)) refresh_transfer_priors();
      for (int side = 0; side < 2; ++side) sweep_side(side);
      if (spec_.check_invariants) check_invariants();
      if (spec_.on_sweep) spec_.on_sweep(t, state_);
      if (scheduler) {
        const bool anneal = scheduler->after_iteration(t, [&] {
          return compute_lis(state_, *spec_.dictionary, hp_.beta, spec_.anneal.lis_folds,
                             Rng::mix64(hp_.seed ^ (0xa5a5a5a5ULL + t)));
        });
        if (anneal) {
          transfer_to_side2_ = anneal_matrix(*transfer_to_side2_, spec_.anneal.temperature);
          transfer_to_side1_ = anneal_matrix(*transfer_to_side1_, spec_.anneal.temperature);
          const auto rows = transfer_to_side2_->nonempty_rows() + transfer_to_side1_->nonempty_rows();
          const double max_mean =
              rows == 0 ? 0.0
                        : (mean_row_max(*transfer_to_side2_) * static_cast<double>(transfer_to_side2_->nonempty_rows()) +
                           mean_row_max(*transfer_to_side1_) * static_cast<double>(transfer_to_side1_->nonempty_rows())) /
                              static_cast<double>(rows);
          scheduler->log_event(t, rows, max_mean);
          spdlog::debug("iteration {}: annealed {} transfer rows, mean max weight {:.4f}", t, rows, max_mean);
        }
      }
    }

    TrainResult result;
    result.model = estimate();
    if (scheduler) result.events = scheduler->events();
    result.model.provenance.anneal_events = result.events.size();
    result.state = std::move(state_);
    result.transfer_to_side2 = std::move(transfer_to_side2_);
    result.transfer_to_side1 = std::move(transfer_to_side1_);
    return result;
  }

 private:
  void validate() const {
    hp_.validate();
    spec_.anneal.validate();
    if (uses_transfer(spec_.kind)) {
      if (!spec_.transfer_to_side2 || !spec_.transfer_to_side1)
        throw ConfigError(to_string(spec_.kind) + " needs transfer matrices in both directions");
      const auto& m2 = *spec_.transfer_to_side2;
      const auto& m1 = *spec_.transfer_to_side1;
      if (m2.rows.size() != corpus_.side2.size() || m2.source_count != corpus_.side1.size() ||
          m1.rows.size() != corpus_.side1.size() || m1.source_count != corpus_.side2.size())
        throw ConfigError("transfer matrix shapes do not match the corpus");
      m2.validate();
      m1.validate();
    }
    if (uses_tree(spec_.kind)) {
      if (!spec_.dictionary) throw ConfigError(to_string(spec_.kind) + " needs a dictionary");
      if (spec_.dictionary->vocab1_size() != corpus_.side1.vocabulary.size() ||
          spec_.dictionary->vocab2_size() != corpus_.side2.vocabulary.size())
        throw ConfigError("dictionary is not indexed against the corpus vocabularies");
    }
    if (spec_.anneal.schedule != AnnealSchedule::kNone && !uses_transfer(spec_.kind))
      throw ConfigError("annealing applies only to models with soft links");
    if (spec_.anneal.schedule == AnnealSchedule::kAdaptive && !spec_.dictionary)
      throw ConfigError("the adaptive schedule needs a dictionary");
  }

  void setup_links() {
    for (int side = 0; side < 2; ++side) {
      partner_[side].assign(corpus_.side(side).size(), kNoPartner);
      group_[side].assign(corpus_.side(side).size(), 0);
    }
    for (const auto& [d1, d2] : corpus_.hard_links) {
      partner_[0][d1] = static_cast<std::int64_t>(d2);
      partner_[1][d2] = static_cast<std::int64_t>(d1);
    }
    // Joint formulation: one pooled count vector per linked pair or lone document.
    std::size_t groups = 0;
    for (std::size_t d = 0; d < corpus_.side1.size(); ++d) group_[0][d] = groups++;
    for (std::size_t d = 0; d < corpus_.side2.size(); ++d) {
      const auto p = partner_[1][d];
      group_[1][d] = p == kNoPartner ? groups++ : group_[0][static_cast<std::size_t>(p)];
    }
    pooled_.assign(groups * K_, 0);
  }

  bool joint() const {
    return spec_.kind == ModelKind::kHardLink && spec_.hardlink == HardLinkFormulation::kJoint;
  }

  void add_token(int side, std::size_t d, std::size_t i, TopicId k, Count delta) {
    const WordId w = corpus_.side(side).documents[d].tokens[i];
    state_.sides[side].update(d, w, k, delta);
    if (joint()) {
      Count& c = pooled_[group_[side][d] * K_ + k];
      c += delta;
      if (c < 0) throw InternalError("negative pooled count");
    }
    if (tree_) tree_->update(leaf_of_token_[side][d][i], k, delta);
  }

  void initialize() {
    for (int side = 0; side < 2; ++side) {
      const auto& docs = corpus_.side(side).documents;
      for (std::size_t d = 0; d < docs.size(); ++d) {
        Rng& rng = rngs_[side][d];
        for (std::size_t i = 0; i < docs[d].tokens.size(); ++i) {
          const auto k = static_cast<TopicId>(rng.below(K_));
          if (tree_) {
            const auto leaves = tree_->leaves_of(side, docs[d].tokens[i]);
            leaf_of_token_[side][d][i] = leaves.size() == 1 ? leaves[0] : leaves[rng.below(leaves.size())];
          }
          state_.sides[side].z[d][i] = k;
          add_token(side, d, i, k, +1);
        }
      }
    }
  }

  void refresh_transfer_priors() {
    const auto& table1 = state_.sides[0].doc_topic_table();
    const auto& table2 = state_.sides[1].doc_topic_table();
    fill_priors(1, *transfer_to_side2_, table1);
    fill_priors(0, *transfer_to_side1_, table2);
  }

  void fill_priors(int side, const TransferMatrix& m, const std::vector<Count>& source_table) {
    auto& priors = priors_[side];
    for (std::size_t d = 0; d < m.rows.size(); ++d) {
      const auto prior = softlink_prior(m.rows[d], source_table, K_);
      std::copy(prior.begin(), prior.end(), priors.begin() + static_cast<std::ptrdiff_t>(d * K_));
    }
  }

  std::span<const double> doc_prior(int side, std::size_t d, bool pooled_as_prior = false) {
    switch (spec_.kind) {
      case ModelKind::kSoftLink:
      case ModelKind::kSoftLinkVocLink:
        return {priors_[side].data() + d * K_, K_};
      case ModelKind::kHardLink: {
        if (joint() && !pooled_as_prior) return {};
        const auto p = partner_[side][d];
        if (p == kNoPartner) return {};
        // The partner lives in the other language, so its counts are fixed while d is swept.
        const auto partner_counts = state_.sides[1 - side].doc_topic(static_cast<std::size_t>(p));
        partner_buffer_.assign(partner_counts.begin(), partner_counts.end());
        return partner_buffer_;
      }
      default:
        return {};
    }
  }

  void sweep_side(int side) {
    const auto& docs = corpus_.side(side).documents;
    auto& counts = state_.sides[side];
    for (std::size_t d = 0; d < docs.size(); ++d) {
      const auto prior = doc_prior(side, d);
      Rng& rng = rngs_[side][d];
      const auto& tokens = docs[d].tokens;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        const WordId w = tokens[i];
        const TopicId old_topic = counts.z[d][i];
        add_token(side, d, i, old_topic, -1);

        const std::span<const Count> doc_topic =
            joint() ? std::span<const Count>(pooled_.data() + group_[side][d] * K_, K_) : counts.doc_topic(d);
        TopicId new_topic = 0;
        if (tree_) {
          const auto leaves = tree_->leaves_of(side, w);
          scratch_.resize(K_ * leaves.size());
          detail::tree_weights(doc_topic, prior, *tree_, side, w, hp_, scratch_);
          const auto idx = detail::sample_index(scratch_, rng.uniform());
          new_topic = static_cast<TopicId>(idx / leaves.size());
          leaf_of_token_[side][d][i] = leaves[idx % leaves.size()];
        } else {
          scratch_.resize(K_);
          detail::flat_weights(doc_topic, prior, counts, w, hp_, scratch_);
          new_topic = static_cast<TopicId>(detail::sample_index(scratch_, rng.uniform()));
        }
        counts.z[d][i] = new_topic;
        add_token(side, d, i, new_topic, +1);
      }
    }
  }

  void check_invariants() const {
    for (int side = 0; side < 2; ++side) check_consistency(state_.sides[side], corpus_.side(side));
    if (tree_) tree_->check_consistency();
    if (joint()) {
      std::vector<Count> expected(pooled_.size(), 0);
      for (int side = 0; side < 2; ++side)
        for (std::size_t d = 0; d < corpus_.side(side).size(); ++d) {
          const auto row = state_.sides[side].doc_topic(d);
          for (std::size_t k = 0; k < K_; ++k) expected[group_[side][d] * K_ + k] += row[k];
        }
      if (expected != pooled_) throw InternalError("pooled link counts differ from document counts");
    }
  }

  TopicModel estimate() {
    TopicModel model;
    model.kind = spec_.kind;
    model.hyperparams = hp_;
    model.provenance.seed = hp_.seed;
    model.provenance.iterations = hp_.train_iterations;
    model.provenance.schedule = to_string(spec_.anneal.schedule);
    if (spec_.kind == ModelKind::kHardLink)
      model.provenance.hardlink_formulation = joint() ? "joint" : "conditional";
    if (uses_transfer(spec_.kind)) refresh_transfer_priors();

    std::array<std::vector<Count>, 2> word_topic;
    for (int side = 0; side < 2; ++side) {
      const auto& corpus = corpus_.side(side);
      const auto& counts = state_.sides[side];
      const std::size_t V = corpus.vocabulary.size();
      model.vocabularies[side] = corpus.vocabulary;
      auto& phi = model.phi[side];
      phi.resize(K_ * V);
      if (tree_) {
        for (std::size_t k = 0; k < K_; ++k) {
          const auto p = tree_->language_word_distribution(side, static_cast<TopicId>(k));
          std::copy(p.begin(), p.end(), phi.begin() + static_cast<std::ptrdiff_t>(k * V));
        }
      } else {
        const double vbeta = static_cast<double>(V) * hp_.beta;
        for (std::size_t k = 0; k < K_; ++k) {
          const double den = static_cast<double>(counts.topic_total()[k]) + vbeta;
          for (std::size_t w = 0; w < V; ++w)
            phi[k * V + w] = (static_cast<double>(counts.word_topic(static_cast<WordId>(w))[k]) + hp_.beta) / den;
        }
      }

      auto& theta = model.theta[side];
      theta.resize(corpus.size() * K_);
      for (std::size_t d = 0; d < corpus.size(); ++d) {
        model.doc_ids[side].push_back(corpus.documents[d].id);
        const auto prior = doc_prior(side, d, true);
        std::vector<double> prior_copy(prior.begin(), prior.end());
        const auto row = counts.doc_topic(d);
        double den = static_cast<double>(corpus.documents[d].tokens.size()) + static_cast<double>(K_) * hp_.alpha;
        for (double p : prior_copy) den += p;
        for (std::size_t k = 0; k < K_; ++k) {
          double num = static_cast<double>(row[k]) + hp_.alpha;
          if (!prior_copy.empty()) num += prior_copy[k];
          theta[d * K_ + k] = num / den;
        }
      }
      word_topic[side] = counts.word_topic_table();
    }
    model.word_topic_counts = std::move(word_topic);
    return model;
  }

  const BilingualCorpus& corpus_;
  const TrainSpec& spec_;
  Hyperparams hp_;
  std::size_t K_;
  CountState state_;
  std::optional<DirichletTree> tree_;
  std::optional<TransferMatrix> transfer_to_side2_;
  std::optional<TransferMatrix> transfer_to_side1_;
  std::array<std::vector<std::vector<LeafId>>, 2> leaf_of_token_;
  std::array<std::vector<std::int64_t>, 2> partner_;
  std::array<std::vector<std::size_t>, 2> group_;
  std::vector<Count> pooled_;
  std::array<std::vector<double>, 2> priors_;
  std::array<std::vector<Rng>, 2> rngs_;
  std::vector<double> partner_buffer_;
  std::vector<double> scratch_;
};

}  // namespace

TrainResult train(const BilingualCorpus& corpus, const TrainSpec& spec) {
  GibbsChain chain(corpus, spec);
  return chain.run();
}

std::vector<double> infer_heldout(const TopicModel& model, int side, const Corpus& heldout,
                                  const InferOptions& options) {
  if (side < 0 || side > 1) throw ConfigError("side must be 0 or 1");
  if (!(heldout.vocabulary == model.vocabularies[side]))
    throw DataError("held-out corpus is not encoded against the model's '" + model.vocabularies[side].language() +
                    "' vocabulary");
  if (options.iterations == 0) throw ConfigError("inference needs at least one iteration");
  heldout.validate();
  const std::size_t K = model.topics();
  const std::size_t V = model.vocabularies[side].size();
  const double alpha = model.hyperparams.alpha;

  // V x K copy so each token reads one contiguous row.
  std::vector<double> phi_by_word(V * K);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w) phi_by_word[w * K + k] = model.phi[side][k * V + w];

  std::vector<double> theta(heldout.size() * K);
  parallel_for(heldout.size(), [&](std::size_t d) {
    const auto& tokens = heldout.documents[d].tokens;
    Rng rng = Rng::stream(options.seed, document_stream(side + 2, d));
    std::vector<Count> doc_topic(K, 0);
    std::vector<TopicId> z(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      z[i] = static_cast<TopicId>(rng.below(K));
      ++doc_topic[z[i]];
    }
    std::vector<double> weights(K);
    for (std::size_t it = 0; it < options.iterations && !tokens.empty(); ++it) {
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        --doc_topic[z[i]];
        const double* phi = phi_by_word.data() + static_cast<std::size_t>(tokens[i]) * K;
        for (std::size_t k = 0; k < K; ++k) weights[k] = (static_cast<double>(doc_topic[k]) + alpha) * phi[k];
        z[i] = static_cast<TopicId>(detail::sample_index(weights, rng.uniform()));
        ++doc_topic[z[i]];
      }
    }
    const double den = static_cast<double>(tokens.size()) + static_cast<double>(K) * alpha;
    for (std::size_t k = 0; k < K; ++k) theta[d * K + k] = (static_cast<double>(doc_topic[k]) + alpha) / den;
  });
  return theta;
}

}  // namespace mltm
