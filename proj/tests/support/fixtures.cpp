#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mltm::test {

std::filesystem::path data_dir() { return MLTM_TEST_DATA_DIR; }

TempDir::TempDir(const std::string& tag) {
  static std::uint64_t counter = 0;
  const auto base = std::filesystem::temp_directory_path();
  Rng rng(Rng::mix64(reinterpret_cast<std::uintptr_t>(this) ^ ++counter));
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto candidate = base / (tag + "-" + std::to_string(rng()));
    if (std::filesystem::create_directory(candidate)) {
      path_ = candidate;
      return;
    }
  }
  throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus make_corpus(const std::string& lang, std::size_t vocab, const std::vector<std::vector<WordId>>& docs) {
  Corpus c;
  c.language = lang;
  c.vocabulary = Vocabulary(lang);
  for (std::size_t w = 0; w < vocab; ++w) c.vocabulary.add(lang + std::to_string(w));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Document doc;
    doc.id = lang + "-" + std::to_string(d);
    doc.tokens = docs[d];
    c.documents.push_back(std::move(doc));
  }
  return c;
}

Corpus random_corpus(Rng& rng, const std::string& lang, std::size_t vocab, std::size_t docs, std::size_t min_len,
                     std::size_t max_len) {
  std::vector<std::vector<WordId>> tokens(docs);
  for (auto& doc : tokens) {
    const auto len = min_len + rng.below(max_len - min_len + 1);
    for (std::size_t i = 0; i < len; ++i) doc.push_back(static_cast<WordId>(rng.below(vocab)));
  }
  return make_corpus(lang, vocab, tokens);
}

LanguageCounts random_counts(Rng& rng, std::size_t docs, std::size_t vocab, std::size_t topics, std::size_t tokens) {
  LanguageCounts counts(docs, vocab, topics);
  for (std::size_t i = 0; i < tokens; ++i)
    counts.update(rng.below(docs), static_cast<WordId>(rng.below(vocab)), static_cast<TopicId>(rng.below(topics)), 1);
  return counts;
}

std::array<std::vector<std::vector<TopicId>>, 2> random_assignments(Rng& rng, const BilingualCorpus& corpus,
                                                                    std::size_t topics) {
  std::array<std::vector<std::vector<TopicId>>, 2> z;
  for (int side = 0; side < 2; ++side)
    for (const auto& doc : corpus.side(side).documents) {
      std::vector<TopicId> zs(doc.tokens.size());
      for (auto& k : zs) k = static_cast<TopicId>(rng.below(topics));
      z[side].push_back(std::move(zs));
    }
  return z;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}


TransferMatrix brute_force_transfer(const Corpus& target, const Corpus& source, const std::vector<Concept>& concepts,
                                    OverlapCount mode) {
  std::set<Concept> unique(concepts.begin(), concepts.end());
  TransferMatrix m;
  m.target_language = target.language;
  m.source_language = source.language;
  m.source_count = source.size();
  for (const auto& t : target.documents) {
    const std::set<WordId> tt(t.tokens.begin(), t.tokens.end());
    TransferRow row;
    double sum = 0.0;
    for (std::size_t s = 0; s < source.size(); ++s) {
      const auto& sd = source.documents[s].tokens;
      const std::set<WordId> st(sd.begin(), sd.end());
      std::size_t overlap = 0;
      if (mode == OverlapCount::kPairs) {
        for (const auto& c : unique) overlap += st.contains(c.word1) && tt.contains(c.word2);
      } else {
        std::set<WordId> ms, mt;
        for (const auto& c : unique)
          if (st.contains(c.word1) && tt.contains(c.word2)) {
            ms.insert(c.word1);
            mt.insert(c.word2);
          }
        overlap = std::min(ms.size(), mt.size());
      }
      if (overlap == 0) continue;
      const double score = static_cast<double>(overlap) / (static_cast<double>(st.size()) + static_cast<double>(tt.size()));
      row.push_back({static_cast<std::uint32_t>(s), score});
      sum += score;
    }
    for (auto& e : row) e.weight /= sum;
    m.rows.push_back(std::move(row));
  }
  return m;
}

double brute_force_cnpmi(const std::vector<WordId>& words1, const std::vector<WordId>& words2,
                         const ReferenceCorpus& ref) {
  const double r = static_cast<double>(ref.size());
  double total = 0.0;
  for (WordId a : words1)
    for (WordId b : words2) {
      std::size_t ca = 0, cb = 0, cab = 0;
      for (std::size_t i = 0; i < ref.size(); ++i) {
        const bool ina = std::binary_search(ref.side1[i].begin(), ref.side1[i].end(), a);
        const bool inb = std::binary_search(ref.side2[i].begin(), ref.side2[i].end(), b);
        ca += ina;
        cb += inb;
        cab += ina && inb;
      }
      double term = 0.0;
      if (ca == 0 || cb == 0)
        term = 0.0;
      else if (cab == 0)
        term = -1.0;
      else if (cab == ref.size())
        term = 1.0;
      else {
        const double p12 = cab / r, p1 = ca / r, p2 = cb / r;
        term = std::log(p12 / (p1 * p2)) / -std::log(p12);
      }
      total += term;
    }
  return total / static_cast<double>(words1.size() * words2.size());
}

ReferenceCorpus random_reference(Rng& rng, std::size_t vocab1, std::size_t vocab2, std::size_t pairs,
                                 std::size_t types) {
  ReferenceCorpus ref;
  auto draw = [&](std::size_t vocab) {
    std::vector<WordId> t;
    for (std::size_t i = 0; i < types; ++i) t.push_back(static_cast<WordId>(rng.below(vocab)));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  };
  for (std::size_t i = 0; i < pairs; ++i) {
    ref.side1.push_back(draw(vocab1));
    ref.side2.push_back(draw(vocab2));
  }
  return ref;
}

CoherentFixture coherent_fixture(std::size_t topics, std::size_t c, std::size_t pairs) {
  CoherentFixture f;
  const std::size_t V = topics * c;
  f.model.hyperparams.topics = topics;
  f.model.kind = ModelKind::kSoftLink;
  f.model.vocabularies[0] = make_corpus("en", V, {}).vocabulary;
  f.model.vocabularies[1] = make_corpus("de", V, {}).vocabulary;
  for (int side = 0; side < 2; ++side) {
    auto& phi = f.model.phi[side];
    phi.assign(topics * V, 0.0);
    for (std::size_t k = 0; k < topics; ++k) {
      double sum = 0.0;
      for (std::size_t w = 0; w < V; ++w) {
        phi[k * V + w] = w / c == k ? 1.0 + static_cast<double>(w % c) : 1e-6;
        sum += phi[k * V + w];
      }
      for (std::size_t w = 0; w < V; ++w) phi[k * V + w] /= sum;
    }
  }
  for (std::size_t i = 0; i < pairs; ++i) {
    std::vector<WordId> block;
    const std::size_t k = i % topics;
    for (std::size_t w = k * c; w < (k + 1) * c; ++w) block.push_back(static_cast<WordId>(w));
    f.reference.side1.push_back(block);
    f.reference.side2.push_back(block);
  }
  return f;
}

TopicModel random_phi_model(Rng& rng, std::size_t topics, std::size_t vocab1, std::size_t vocab2) {
  TopicModel m;
  m.hyperparams.topics = topics;
  m.vocabularies[0] = make_corpus("en", vocab1, {}).vocabulary;
  m.vocabularies[1] = make_corpus("de", vocab2, {}).vocabulary;
  for (int side = 0; side < 2; ++side) {
    const std::size_t V = side == 0 ? vocab1 : vocab2;
    auto& phi = m.phi[side];
    phi.resize(topics * V);
    for (std::size_t k = 0; k < topics; ++k) {
      double sum = 0.0;
      for (std::size_t w = 0; w < V; ++w) sum += phi[k * V + w] = -std::log(1.0 - rng.uniform());
      for (std::size_t w = 0; w < V; ++w) phi[k * V + w] /= sum;
    }
  }
  return m;
}

}  // namespace mltm::test
