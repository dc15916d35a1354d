#include "mltm/dictionary.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "mltm/error.hpp"
#include "mltm/rng.hpp"

namespace mltm {

BilingualDictionary::BilingualDictionary(std::vector<Concept> concepts, std::size_t vocab1_size,
                                         std::size_t vocab2_size)
    : by_word1_(vocab1_size), by_word2_(vocab2_size) {
  std::set<Concept> seen;
  concepts_.reserve(concepts.size());
  for (const auto& c : concepts) {
    if (c.word1 >= vocab1_size || c.word2 >= vocab2_size)
      throw DataError("concept (" + std::to_string(c.word1) + ", " + std::to_string(c.word2) +
                      ") outside vocabulary");
    if (!seen.insert(c).second) continue;
    const auto id = static_cast<ConceptId>(concepts_.size());
    concepts_.push_back(c);
    by_word1_[c.word1].push_back(id);
    by_word2_[c.word2].push_back(id);
  }
}

BilingualDictionary BilingualDictionary::swapped() const {
  std::vector<Concept> flipped;
  flipped.reserve(concepts_.size());
  for (const auto& c : concepts_) flipped.push_back({c.word2, c.word1});
  return BilingualDictionary(std::move(flipped), by_word2_.size(), by_word1_.size());
}

namespace {

bool has_space(const std::string& s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

BilingualDictionary load_dictionary(const std::filesystem::path& path, const Vocabulary& v1,
                                    const Vocabulary& v2, DictionaryLoadReport* report) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dictionary " + path.string());
  DictionaryLoadReport rep;
  std::set<Concept> seen;
  std::vector<Concept> concepts;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.empty() || text.front() == '#') continue;
    ++rep.lines;
    const auto tab = text.find('\t');
    if (tab == std::string::npos || text.find('\t', tab + 1) != std::string::npos)
      throw DataError("dictionary line " + std::to_string(line) + ": expected two tab-separated columns");
    const std::string w1 = text.substr(0, tab);
    const std::string w2 = text.substr(tab + 1);
    if (w1.empty() || w2.empty())
      throw DataError("dictionary line " + std::to_string(line) + ": empty column");
    if (has_space(w1) || has_space(w2)) {
      ++rep.dropped_multiword;
      continue;
    }
    auto id1 = v1.find(w1);
    auto id2 = v2.find(w2);
    if (!id1 || !id2) {
      ++rep.dropped_out_of_vocabulary;
      continue;
    }
    Concept c{*id1, *id2};
    if (!seen.insert(c).second) {
      ++rep.duplicates;
      continue;
    }
    concepts.push_back(c);
  }
  rep.retained = concepts.size();
  if (concepts.empty()) spdlog::warn("dictionary {} has no usable entries", path.string());
  if (rep.dropped_out_of_vocabulary > 0)
    spdlog::info("dictionary {}: dropped {} out-of-vocabulary pairs", path.string(), rep.dropped_out_of_vocabulary);
  if (report) *report = rep;
  return BilingualDictionary(std::move(concepts), v1.size(), v2.size());
}

void write_dictionary(const std::filesystem::path& path, const BilingualDictionary& dict,
                      const Vocabulary& v1, const Vocabulary& v2) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "# " << v1.language() << '\t' << v2.language() << '\n';
  for (const auto& c : dict.concepts()) out << v1.word(c.word1) << '\t' << v2.word(c.word2) << '\n';
}

BilingualDictionary subsample(const BilingualDictionary& dict, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw ConfigError("dictionary fraction must be in (0, 1], got " + std::to_string(fraction));
  const std::size_t n = dict.size();
  const auto keep = std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(Rng::mix64(seed));
  // Partial Fisher-Yates: the first `keep` slots are a uniform sample.
  for (std::size_t i = 0; i < keep; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }
  order.resize(keep);
  std::sort(order.begin(), order.end());
  std::vector<Concept> kept;
  kept.reserve(keep);
  for (auto i : order) kept.push_back(dict.concepts()[i]);
  return BilingualDictionary(std::move(kept), dict.vocab1_size(), dict.vocab2_size());
}

}  // namespace mltm
