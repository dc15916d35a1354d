#include "mltm/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "mltm/error.hpp"
#include "mltm/parallel.hpp"

namespace mltm {

std::size_t TransferMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& row : rows) n += row.size();
  return n;
}

std::size_t TransferMatrix::nonempty_rows() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.empty(); }));
}

void TransferMatrix::validate(double tol) const {
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& row = rows[t];
    if (row.empty()) continue;
    double sum = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].source >= source_count) throw InternalError("transfer row " + std::to_string(t) + " index out of range");
      if (i > 0 && row[i].source <= row[i - 1].source)
        throw InternalError("transfer row " + std::to_string(t) + " not strictly sorted");
      if (!(row[i].weight >= 0.0)) throw InternalError("transfer row " + std::to_string(t) + " has a negative weight");
      sum += row[i].weight;
    }
    if (std::abs(sum - 1.0) > tol) throw InternalError("transfer row " + std::to_string(t) + " sums to " + std::to_string(sum));
  }
}

namespace {

std::vector<WordId> distinct_types(const Document& doc) {
  std::vector<WordId> types(doc.tokens);
  std::sort(types.begin(), types.end());
  types.erase(std::unique(types.begin(), types.end()), types.end());
  return types;
}

void normalize(TransferRow& row) {
  double sum = 0.0;
  for (const auto& e : row) sum += e.weight;
  if (sum <= 0.0) {
    row.clear();
    return;
  }
  for (auto& e : row) e.weight /= sum;
}

}  // namespace

TransferMatrix build_transfer_matrix(const Corpus& target, const Corpus& source, const BilingualDictionary& dict,
                                     OverlapCount mode) {
  if (dict.vocab1_size() != source.vocabulary.size() || dict.vocab2_size() != target.vocabulary.size())
    throw DataError("dictionary is not indexed against the (source, target) vocabularies");

  const std::size_t n_source = source.documents.size();
  std::vector<std::uint32_t> source_types(n_source);
  std::vector<std::vector<std::uint32_t>> docs_with_word(source.vocabulary.size());
  for (std::size_t d = 0; d < n_source; ++d) {
    const auto types = distinct_types(source.documents[d]);
    source_types[d] = static_cast<std::uint32_t>(types.size());
    for (WordId w : types) docs_with_word[w].push_back(static_cast<std::uint32_t>(d));
  }

  TransferMatrix m;
  m.target_language = target.language;
  m.source_language = source.language;
  m.source_count = n_source;
  m.rows.resize(target.documents.size());

  parallel_for(target.documents.size(), [&](std::size_t t) {
    thread_local std::vector<std::uint32_t> pair_count;
    thread_local std::vector<std::uint32_t> target_matched;
    thread_local std::vector<std::uint64_t> stamp;
    thread_local std::uint64_t clock = 0;
    // Scratch arrays stay zeroed between documents; only touched slots are reset.
    if (pair_count.size() < n_source) pair_count.resize(n_source, 0);
    std::vector<std::uint32_t> touched;
    const auto types = distinct_types(target.documents[t]);

    if (mode == OverlapCount::kPairs) {
      for (WordId w2 : types)
        for (ConceptId c : dict.concepts_of_word2(w2))
          for (auto d : docs_with_word[dict.at(c).word1]) {
            if (pair_count[d]++ == 0) touched.push_back(d);
          }
    } else {
      // pair_count holds matched source types; target_matched matched target types.
      if (target_matched.size() < n_source) target_matched.resize(n_source, 0);
      if (stamp.size() < n_source) stamp.resize(n_source, 0);
      std::vector<WordId> source_words;
      for (WordId w2 : types) {
        ++clock;
        for (ConceptId c : dict.concepts_of_word2(w2)) {
          source_words.push_back(dict.at(c).word1);
          for (auto d : docs_with_word[dict.at(c).word1]) {
            if (stamp[d] == clock) continue;
            stamp[d] = clock;
            if (target_matched[d]++ == 0) touched.push_back(d);
          }
        }
      }
      std::sort(source_words.begin(), source_words.end());
      source_words.erase(std::unique(source_words.begin(), source_words.end()), source_words.end());
      for (WordId w1 : source_words)
        for (auto d : docs_with_word[w1]) ++pair_count[d];
      for (auto d : touched) {
        pair_count[d] = std::min(pair_count[d], target_matched[d]);
        target_matched[d] = 0;
      }
    }

    std::sort(touched.begin(), touched.end());
    TransferRow row;
    row.reserve(touched.size());
    const auto target_types = static_cast<double>(types.size());
    for (auto d : touched) {
      const double overlap = pair_count[d];
      row.push_back({d, overlap / (static_cast<double>(source_types[d]) + target_types)});
      pair_count[d] = 0;
    }
    normalize(row);
    m.rows[t] = std::move(row);
  });
  return m;
}

TransferMatrix static_focus(const TransferMatrix& m, const FocusConfig& cfg) {
  if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0))
    throw ConfigError("focal threshold must be in [0, 1], got " + std::to_string(cfg.threshold));
  double corpus_max = 0.0;
  if (cfg.scope == FocusScope::kCorpusWise)
    for (const auto& row : m.rows)
      for (const auto& e : row) corpus_max = std::max(corpus_max, e.weight);

  TransferMatrix out = m;
  parallel_for(out.rows.size(), [&](std::size_t t) {
    auto& row = out.rows[t];
    if (row.empty()) return;
    double max = corpus_max;
    if (cfg.scope == FocusScope::kDocWise) {
      max = 0.0;
      for (const auto& e : row) max = std::max(max, e.weight);
    }
    const double cut = cfg.threshold * max;
    std::erase_if(row, [cut](const TransferEntry& e) { return !(e.weight > cut); });
    normalize(row);
  });
  return out;
}

TransferMatrix anneal_matrix(const TransferMatrix& m, double temperature) {
  if (!(temperature > 0.0 && temperature <= 1.0))
    throw ConfigError("annealing temperature must be in (0, 1], got " + std::to_string(temperature));
  TransferMatrix out = m;
  if (temperature == 1.0) return out;
  const double exponent = 1.0 / temperature;
  parallel_for(out.rows.size(), [&](std::size_t t) {
    auto& row = out.rows[t];
    if (row.size() <= 1) return;
    double max = 0.0;
    for (const auto& e : row) max = std::max(max, e.weight);
    if (max <= 0.0) return;
    // Scaling by the row max first keeps the largest term at exactly 1.
    double sum = 0.0;
    for (auto& e : row) {
      e.weight = std::pow(e.weight / max, exponent);
      sum += e.weight;
    }
    for (auto& e : row) e.weight /= sum;
  });
  return out;
}

double mean_row_max(const TransferMatrix& m) {
  double total = 0.0;
  std::size_t rows = 0;
  for (const auto& row : m.rows) {
    if (row.empty()) continue;
    double max = 0.0;
    for (const auto& e : row) max = std::max(max, e.weight);
    total += max;
    ++rows;
  }
  return rows == 0 ? 0.0 : total / static_cast<double>(rows);
}

void write_transfer_tsv(const std::filesystem::path& path, const TransferMatrix& m, const Corpus& target,
                        const Corpus& source) {
  if (m.rows.size() != target.documents.size() || m.source_count != source.documents.size())
    throw DataError("transfer matrix shape does not match the corpora");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  char buf[64];
  for (std::size_t t = 0; t < m.rows.size(); ++t) {
    TransferRow row = m.rows[t];
    std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.weight > b.weight; });
    for (const auto& e : row) {
      std::snprintf(buf, sizeof buf, "%.17g", e.weight);
      out << target.documents[t].id << '\t' << source.documents[e.source].id << '\t' << buf << '\n';
    }
  }
}

TransferMatrix read_transfer_tsv(const std::filesystem::path& path, const Corpus& target, const Corpus& source) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::unordered_map<std::string, std::size_t> target_index, source_index;
  for (std::size_t i = 0; i < target.documents.size(); ++i) target_index.emplace(target.documents[i].id, i);
  for (std::size_t i = 0; i < source.documents.size(); ++i) source_index.emplace(source.documents[i].id, i);

  TransferMatrix m;
  m.target_language = target.language;
  m.source_language = source.language;
  m.source_count = source.documents.size();
  m.rows.resize(target.documents.size());
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    std::istringstream fields(text);
    std::string tid, sid, weight;
    if (!std::getline(fields, tid, '\t') || !std::getline(fields, sid, '\t') || !std::getline(fields, weight))
      throw DataError("transfer TSV line " + std::to_string(line) + ": expected three columns");
    auto t = target_index.find(tid);
    auto s = source_index.find(sid);
    if (t == target_index.end() || s == source_index.end())
      throw DataError("transfer TSV line " + std::to_string(line) + ": unknown document id");
    double w = 0.0;
    try {
      w = std::stod(weight);
    } catch (const std::exception&) {
      throw DataError("transfer TSV line " + std::to_string(line) + ": bad weight");
    }
    m.rows[t->second].push_back({static_cast<std::uint32_t>(s->second), w});
  }
  for (auto& row : m.rows)
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.source < b.source; });
  try {
    m.validate();
  } catch (const InternalError& e) {
    throw DataError(std::string("invalid transfer TSV: ") + e.what());
  }
  return m;
}

std::string to_string(FocusScope scope) { return scope == FocusScope::kDocWise ? "doc_wise" : "corpus_wise"; }

FocusScope parse_focus_scope(const std::string& text) {
  if (text == "doc_wise" || text == "doc") return FocusScope::kDocWise;
  if (text == "corpus_wise" || text == "corpus") return FocusScope::kCorpusWise;
  throw ConfigError("unknown focus scope '" + text + "'");
}

void AnnealConfig::validate() const {
  if (!(temperature > 0.0 && temperature <= 1.0))
    throw ConfigError("annealing temperature must be in (0, 1]");
  if (interval < 1) throw ConfigError("annealing interval must be at least 1");
  if (lis_every < 1) throw ConfigError("LIS evaluation period must be at least 1");
  if (lis_folds < 2) throw ConfigError("LIS needs at least 2 folds");
}

std::string to_string(AnnealSchedule schedule) {
  switch (schedule) {
    case AnnealSchedule::kNone: return "none";
    case AnnealSchedule::kFixed: return "fixed";
    case AnnealSchedule::kAdaptive: return "adaptive";
  }
  return "none";
}

AnnealSchedule parse_anneal_schedule(const std::string& text) {
  if (text == "none") return AnnealSchedule::kNone;
  if (text == "fixed") return AnnealSchedule::kFixed;
  if (text == "adaptive" || text == "lis") return AnnealSchedule::kAdaptive;
  throw ConfigError("unknown annealing schedule '" + text + "'");
}

TransferPair build_transfer_pair(const BilingualCorpus& corpus, const BilingualDictionary& dict,
                                 const FocusConfig& focus, OverlapCount mode) {
  return {static_focus(build_transfer_matrix(corpus.side2, corpus.side1, dict, mode), focus),
          static_focus(build_transfer_matrix(corpus.side1, corpus.side2, dict.swapped(), mode), focus)};
}

}  // namespace mltm
