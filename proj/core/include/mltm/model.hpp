#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mltm/corpus.hpp"
#include "mltm/count_state.hpp"

namespace mltm {

enum class ModelKind { kLda, kHardLink, kSoftLink, kVocLink, kSoftLinkVocLink };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

inline bool uses_transfer(ModelKind kind) {
  return kind == ModelKind::kSoftLink || kind == ModelKind::kSoftLinkVocLink;
}
inline bool uses_tree(ModelKind kind) {
  return kind == ModelKind::kVocLink || kind == ModelKind::kSoftLinkVocLink;
}

struct Provenance {
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::string schedule = "none";
  std::size_t anneal_events = 0;
  std::string hardlink_formulation;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Posterior-mean estimates from the final sample of a training chain.
struct TopicModel {
  ModelKind kind = ModelKind::kLda;
  Hyperparams hyperparams;
  std::array<Vocabulary, 2> vocabularies;
  /// K x V per language, row-major; each row sums to 1.
  std::array<std::vector<double>, 2> phi;
  std::array<std::vector<std::string>, 2> doc_ids;
  /// D x K per language, row-major; each row sums to 1.
  std::array<std::vector<double>, 2> theta;
  Provenance provenance;
  /// V x K word-topic counts per language, kept for LIS and resumption.
  std::optional<std::array<std::vector<Count>, 2>> word_topic_counts;

  std::size_t topics() const { return hyperparams.topics; }
  std::span<const double> phi_row(int side, std::size_t k) const {
    const auto v = vocabularies[side].size();
    return {phi[side].data() + k * v, v};
  }
  std::span<const double> theta_row(int side, std::size_t d) const {
    return {theta[side].data() + d * topics(), topics()};
  }

  friend bool operator==(const TopicModel&, const TopicModel&) = default;
};

inline constexpr int kModelFormatVersion = 1;

/// Versioned JSON container {format_version, model_kind, hyperparams,
/// vocabularies, phi, theta, provenance[, counts]}.
void save_model(const std::filesystem::path& path, const TopicModel& model, bool include_counts = true);
TopicModel load_model(const std::filesystem::path& path);
std::string serialize_model(const TopicModel& model, bool include_counts = true);

/// Rebuilds the per-language count tables stored in a model (z is left empty).
CountState counts_from_model(const TopicModel& model);

/// {format_version, language, doc_ids, theta} for inferred document topics.
void save_theta(const std::filesystem::path& path, const std::string& language, const std::vector<std::string>& doc_ids,
                const std::vector<double>& theta, std::size_t topics);
struct ThetaFile {
  std::string language;
  std::vector<std::string> doc_ids;
  std::vector<double> theta;
  std::size_t topics = 0;
};
ThetaFile load_theta(const std::filesystem::path& path);

}  // namespace mltm
