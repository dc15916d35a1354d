#include "mltm/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"
#include "mltm/conditionals.hpp"
#include "mltm/error.hpp"
#include "mltm/rng.hpp"

namespace mltm {

namespace {

constexpr double kSingleTopicSharpness = 1e6;

std::string word_name(char prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  return std::string(1, prefix) + std::string(digits.size() < 4 ? 4 - digits.size() : 0, '0') + digits;
}

std::vector<double> dirichlet(Rng& rng, double concentration, std::size_t n) {
  std::gamma_distribution<double> gamma(concentration, 1.0);
  std::vector<double> out(n);
  double sum = 0.0;
  for (auto& v : out) sum += (v = gamma(rng));
  if (sum <= 0.0) {
    // Every draw underflowed; fall back to one uniformly chosen component.
    std::fill(out.begin(), out.end(), 0.0);
    out[rng.below(n)] = 1.0;
    return out;
  }
  for (auto& v : out) v /= sum;
  return out;
}

std::vector<double> draw_theta(Rng& rng, const SyntheticParams& p) {
  if (p.topic_sharpness >= kSingleTopicSharpness) {
    std::vector<double> theta(p.topics, 0.0);
    theta[rng.below(p.topics)] = 1.0;
    return theta;
  }
  return dirichlet(rng, 1.0 / p.topic_sharpness, p.topics);
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Tokens of one document: topic from theta, then word from that topic's phi row.
std::vector<WordId> draw_tokens(Rng& rng, std::span<const double> theta, const std::vector<double>& phi,
                                std::size_t V, std::size_t length) {
  std::vector<WordId> tokens(length);
  for (auto& t : tokens) {
    const auto k = detail::sample_index(theta, rng.uniform());
    t = static_cast<WordId>(detail::sample_index(std::span<const double>(phi.data() + k * V, V), rng.uniform()));
  }
  return tokens;
}

}  // namespace

void SyntheticParams::validate() const {
  if (topics < 1 || vocab_per_language < topics || docs_per_language < 1 || doc_length < 1)
    throw ConfigError("synthetic sizes must be positive with at least one word per topic");
  if (!(dict_coverage >= 0.0 && dict_coverage <= 1.0)) throw ConfigError("dict_coverage must be in [0, 1]");
  if (!(link_fraction >= 0.0 && link_fraction <= 1.0)) throw ConfigError("link_fraction must be in [0, 1]");
  if (!(topic_sharpness > 0.0)) throw ConfigError("topic_sharpness must be positive");
  if (!(leak >= 0.0 && leak < 1.0)) throw ConfigError("leak must be in [0, 1)");
}

SyntheticData generate_synthetic(const SyntheticParams& params) {
  params.validate();
  const std::size_t K = params.topics;
  const std::size_t V = params.vocab_per_language;
  const std::size_t D = params.docs_per_language;
  SyntheticData data;
  data.params = params;

  Rng rng = Rng::stream(params.seed, 0);

  // Topics over the first language.
  std::vector<double> phi1(K * V, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t begin = k * V / K;
    const std::size_t end = (k + 1) * V / K;
    const auto weights = dirichlet(rng, 1.0, end - begin);
    const double off = V > end - begin ? params.leak / static_cast<double>(V - (end - begin)) : 0.0;
    const double on = V > end - begin ? 1.0 - params.leak : 1.0;
    for (std::size_t w = 0; w < V; ++w)
      phi1[k * V + w] = (w >= begin && w < end) ? on * weights[w - begin] : off;
  }

  // Second language: a random relabelling of the same distributions.
  data.translation.resize(V);
  std::iota(data.translation.begin(), data.translation.end(), WordId{0});
  for (std::size_t i = V; i > 1; --i) std::swap(data.translation[i - 1], data.translation[rng.below(i)]);
  std::vector<double> phi2(K * V, 0.0);
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t w = 0; w < V; ++w) phi2[k * V + data.translation[w]] = phi1[k * V + w];
  data.phi = {std::move(phi1), std::move(phi2)};

  // Dictionary: ceil(coverage * V) pairs chosen without replacement.
  const auto entries = static_cast<std::size_t>(std::ceil(params.dict_coverage * static_cast<double>(V) - 1e-9));
  std::vector<WordId> order(V);
  std::iota(order.begin(), order.end(), WordId{0});
  for (std::size_t i = 0; i < entries; ++i) std::swap(order[i], order[i + rng.below(V - i)]);
  std::vector<WordId> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(entries));
  std::sort(chosen.begin(), chosen.end());
  std::vector<Concept> concepts;
  for (WordId w : chosen) concepts.push_back({w, data.translation[w]});
  data.dictionary = BilingualDictionary(std::move(concepts), V, V);

  // Documents.
  const char prefixes[2] = {'a', 'b'};
  const char* languages[2] = {"l1", "l2"};
  std::array<Corpus, 2> corpora;
  for (int side = 0; side < 2; ++side) {
    corpora[side].language = languages[side];
    corpora[side].vocabulary = Vocabulary(languages[side]);
    for (std::size_t w = 0; w < V; ++w) corpora[side].vocabulary.add(word_name(prefixes[side], w));
    data.theta[side].reserve(D * K);
  }
  const auto linked = static_cast<std::size_t>(std::floor(params.link_fraction * static_cast<double>(D)));
  for (std::size_t d = 0; d < D; ++d) {
    std::array<std::vector<double>, 2> theta;
    theta[0] = draw_theta(rng, params);
    theta[1] = d < linked ? theta[0] : draw_theta(rng, params);
    for (int side = 0; side < 2; ++side) {
      Document doc;
      doc.id = std::string(languages[side]) + "_" + std::to_string(d);
      doc.tokens = draw_tokens(rng, theta[side], data.phi[side], V, params.doc_length);
      const auto label = argmax(theta[side]);
      doc.labels = {"topic_" + std::to_string(label)};
      if (d < linked) doc.link = "pair_" + std::to_string(d);
      data.labels[side].push_back(label);
      data.theta[side].insert(data.theta[side].end(), theta[side].begin(), theta[side].end());
      corpora[side].documents.push_back(std::move(doc));
    }
  }
  data.corpus = pair_corpora(std::move(corpora[0]), std::move(corpora[1]));
  return data;
}

std::vector<ReferenceRecord> generate_reference(const SyntheticData& data, std::size_t pairs, std::uint64_t seed) {
  const auto& p = data.params;
  const std::size_t V = p.vocab_per_language;
  Rng rng = Rng::stream(seed, 1);
  std::vector<ReferenceRecord> records;
  records.reserve(pairs);
  for (std::size_t r = 0; r < pairs; ++r) {
    const auto theta = draw_theta(rng, p);
    ReferenceRecord record;
    for (int side = 0; side < 2; ++side) {
      auto tokens = draw_tokens(rng, theta, data.phi[side], V, p.doc_length);
      std::sort(tokens.begin(), tokens.end());
      tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
      auto& types = side == 0 ? record.l1_types : record.l2_types;
      for (WordId w : tokens) types.push_back(data.corpus.side(side).vocabulary.word(w));
    }
    records.push_back(std::move(record));
  }
  return records;
}

void write_synthetic(const std::filesystem::path& dir, const SyntheticData& data, std::size_t reference_pairs,
                     std::uint64_t reference_seed) {
  std::filesystem::create_directories(dir);
  write_corpus_jsonl(dir / "corpus_l1.jsonl", data.corpus.side1);
  write_corpus_jsonl(dir / "corpus_l2.jsonl", data.corpus.side2);
  write_dictionary(dir / "dictionary.tsv", data.dictionary, data.corpus.side1.vocabulary,
                   data.corpus.side2.vocabulary);
  const std::size_t K = data.params.topics;
  const std::size_t V = data.params.vocab_per_language;
  nlohmann::json truth;
  truth["format_version"] = 1;
  truth["topics"] = K;
  truth["seed"] = data.params.seed;
  truth["translation"] = data.translation;
  for (int side = 0; side < 2; ++side) {
    nlohmann::json lang;
    lang["language"] = data.corpus.side(side).language;
    nlohmann::json phi = nlohmann::json::array();
    for (std::size_t k = 0; k < K; ++k)
      phi.push_back(std::vector<double>(data.phi[side].begin() + static_cast<std::ptrdiff_t>(k * V),
                                        data.phi[side].begin() + static_cast<std::ptrdiff_t>((k + 1) * V)));
    lang["phi"] = std::move(phi);
    nlohmann::json theta = nlohmann::json::array();
    for (std::size_t d = 0; d < data.labels[side].size(); ++d)
      theta.push_back(std::vector<double>(data.theta[side].begin() + static_cast<std::ptrdiff_t>(d * K),
                                          data.theta[side].begin() + static_cast<std::ptrdiff_t>((d + 1) * K)));
    lang["theta"] = std::move(theta);
    lang["labels"] = data.labels[side];
    truth["languages"].push_back(std::move(lang));
  }
  std::ofstream out(dir / "truth.json");
  if (!out) throw DataError("cannot write " + (dir / "truth.json").string());
  out << truth.dump() << '\n';
  if (reference_pairs > 0)
    write_reference_records(dir / "reference.jsonl", generate_reference(data, reference_pairs, reference_seed));
}

}  // namespace mltm
