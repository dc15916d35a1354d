#include "mltm/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mltm/error.hpp"

namespace mltm {

using nlohmann::json;

WordId Vocabulary::add(std::string_view word) {
  auto [it, inserted] = ids_.try_emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::total_tokens() const {
  return std::accumulate(documents.begin(), documents.end(), std::size_t{0},
                         [](std::size_t acc, const Document& d) { return acc + d.tokens.size(); });
}

void Corpus::validate() const {
  const auto v = vocabulary.size();
  for (const auto& doc : documents)
    for (WordId w : doc.tokens)
      if (w >= v) throw DataError("document " + doc.id + " has token id " + std::to_string(w) +
                                  " outside vocabulary of size " + std::to_string(v));
}

namespace {

std::vector<std::string> string_array(const json& value, const char* field, std::size_t line) {
  if (!value.is_array())
    throw DataError("line " + std::to_string(line) + ": field '" + field + "' must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const auto& item : value) {
    if (!item.is_string())
      throw DataError("line " + std::to_string(line) + ": field '" + field +
                      "' must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

struct ParsedRecord {
  RawDocument doc;
  std::string lang;
};

ParsedRecord parse_record(const std::string& text, std::size_t line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError("line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")");
  }
  if (!record.is_object()) throw DataError("line " + std::to_string(line) + ": record is not an object");
  auto require_string = [&](const char* field) {
    auto it = record.find(field);
    if (it == record.end() || !it->is_string())
      throw DataError("line " + std::to_string(line) + ": missing string field '" + field + "'");
    return it->get<std::string>();
  };
  ParsedRecord out;
  out.doc.id = require_string("id");
  out.lang = require_string("lang");
  auto tokens = record.find("tokens");
  if (tokens == record.end()) throw DataError("line " + std::to_string(line) + ": missing field 'tokens'");
  out.doc.tokens = string_array(*tokens, "tokens", line);
  if (auto labels = record.find("labels"); labels != record.end() && !labels->is_null())
    out.doc.labels = string_array(*labels, "labels", line);
  if (auto link = record.find("link"); link != record.end() && !link->is_null()) {
    if (!link->is_string()) throw DataError("line " + std::to_string(line) + ": field 'link' must be a string");
    out.doc.link = link->get<std::string>();
  }
  return out;
}

template <class OnRecord>
void for_each_record(const std::filesystem::path& path, std::string_view language, OnRecord&& on_record) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  std::unordered_set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    auto parsed = parse_record(text, line);
    if (!language.empty() && parsed.lang != language)
      throw DataError("line " + std::to_string(line) + ": language '" + parsed.lang +
                      "' does not match expected '" + std::string(language) + "'");
    if (!seen.insert(parsed.doc.id).second)
      throw DataError("line " + std::to_string(line) + ": duplicate doc_id '" + parsed.doc.id + "'");
    on_record(std::move(parsed.doc));
  }
}

}  // namespace

std::vector<std::string> read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file " + path.string());
  std::vector<std::string> words;
  std::string text;
  while (std::getline(in, text)) {
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (!text.empty()) words.push_back(text);
  }
  return words;
}

Corpus build_corpus(std::vector<RawDocument> records, std::string_view language,
                    const LoaderOptions& options, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = {};
  rep.records = records.size();

  {
    std::unordered_set<std::string_view> ids;
    for (const auto& r : records)
      if (!ids.insert(r.id).second) throw DataError("duplicate doc_id '" + r.id + "'");
  }

  std::unordered_set<std::string> removed;
  if (options.stopwords) {
    for (auto& w : read_stopwords(*options.stopwords)) removed.insert(std::move(w));
  }

  if (options.remove_top_frequent > 0) {
    std::unordered_map<std::string_view, std::size_t> freq;
    for (const auto& r : records)
      for (const auto& t : r.tokens)
        if (!removed.contains(t)) ++freq[t];
    std::vector<std::pair<std::string_view, std::size_t>> ranked(freq.begin(), freq.end());
    const std::size_t n = std::min(options.remove_top_frequent, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(n), ranked.end(),
                      [](const auto& a, const auto& b) {
                        return a.second != b.second ? a.second > b.second : a.first < b.first;
                      });
    for (std::size_t i = 0; i < n; ++i) rep.removed_frequent.emplace_back(ranked[i].first);
    for (const auto& w : rep.removed_frequent) removed.insert(w);
  }

  Corpus corpus;
  corpus.language = std::string(language);
  corpus.vocabulary = Vocabulary(corpus.language);
  corpus.documents.reserve(records.size());
  for (auto& r : records) {
    Document doc;
    doc.id = std::move(r.id);
    doc.labels = std::move(r.labels);
    doc.link = std::move(r.link);
    doc.tokens.reserve(r.tokens.size());
    for (const auto& t : r.tokens)
      if (!removed.contains(t)) doc.tokens.push_back(corpus.vocabulary.add(t));
    if (doc.tokens.empty() && !options.keep_empty) {
      ++rep.dropped_empty;
      spdlog::warn("{}: dropping document '{}' with no tokens after filtering", corpus.language, doc.id);
      continue;
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty()) throw DataError("corpus '" + corpus.language + "' is empty after filtering");
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, std::string_view language,
                   const LoaderOptions& options, LoadReport* report) {
  std::vector<RawDocument> records;
  for_each_record(path, language, [&](RawDocument doc) { records.push_back(std::move(doc)); });
  return build_corpus(std::move(records), language, options, report);
}

Corpus encode_heldout(const std::filesystem::path& path, const Vocabulary& vocabulary, LoadReport* report) {
  LoadReport local;
  LoadReport& rep = report ? *report : local;
  rep = {};
  Corpus corpus;
  corpus.language = vocabulary.language();
  corpus.vocabulary = vocabulary;
  for_each_record(path, vocabulary.language(), [&](RawDocument raw) {
    ++rep.records;
    Document doc;
    doc.id = std::move(raw.id);
    doc.labels = std::move(raw.labels);
    doc.link = std::move(raw.link);
    for (const auto& t : raw.tokens) {
      if (auto id = vocabulary.find(t)) doc.tokens.push_back(*id);
      else ++rep.dropped_oov_tokens;
    }
    corpus.documents.push_back(std::move(doc));
  });
  return corpus;
}

void write_corpus_jsonl(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& doc : corpus.documents) {
    json record;
    record["id"] = doc.id;
    record["lang"] = corpus.language;
    json tokens = json::array();
    for (WordId w : doc.tokens) tokens.push_back(corpus.vocabulary.word(w));
    record["tokens"] = std::move(tokens);
    if (!doc.labels.empty()) record["labels"] = doc.labels;
    if (!doc.link.empty()) record["link"] = doc.link;
    out << record.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  json doc;
  doc["format_version"] = kCorpusFormatVersion;
  doc["language"] = corpus.language;
  doc["vocabulary"] = corpus.vocabulary.words();
  json docs = json::array();
  for (const auto& d : corpus.documents) {
    docs.push_back({{"id", d.id}, {"tokens", d.tokens}, {"labels", d.labels}, {"link", d.link}});
  }
  doc["documents"] = std::move(docs);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump() << '\n';
}

Corpus read_saved_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
    if (doc.at("format_version").get<int>() != kCorpusFormatVersion)
      throw DataError("unsupported corpus format_version in " + path.string());
    Corpus corpus;
    corpus.language = doc.at("language").get<std::string>();
    corpus.vocabulary = Vocabulary(corpus.language);
    for (const auto& w : doc.at("vocabulary")) corpus.vocabulary.add(w.get<std::string>());
    if (corpus.vocabulary.size() != doc.at("vocabulary").size())
      throw DataError("duplicate words in saved vocabulary " + path.string());
    for (const auto& d : doc.at("documents")) {
      Document out;
      out.id = d.at("id").get<std::string>();
      out.tokens = d.at("tokens").get<std::vector<WordId>>();
      out.labels = d.at("labels").get<std::vector<std::string>>();
      out.link = d.at("link").get<std::string>();
      corpus.documents.push_back(std::move(out));
    }
    corpus.validate();
    return corpus;
  } catch (const json::exception& e) {
    throw DataError("malformed saved corpus " + path.string() + ": " + e.what());
  }
}

BilingualCorpus pair_corpora(Corpus c1, Corpus c2) {
  if (c1.language == c2.language)
    throw ConfigError("cannot pair two corpora of the same language '" + c1.language + "'");
  BilingualCorpus out;
  auto index_links = [](const Corpus& c) {
    std::unordered_map<std::string, std::size_t> by_link;
    for (std::size_t i = 0; i < c.documents.size(); ++i) {
      const auto& link = c.documents[i].link;
      if (link.empty()) continue;
      if (!by_link.emplace(link, i).second)
        throw DataError("duplicate link id '" + link + "' in corpus '" + c.language + "'");
    }
    return by_link;
  };
  const auto links1 = index_links(c1);
  const auto links2 = index_links(c2);
  for (std::size_t i = 0; i < c1.documents.size(); ++i) {
    const auto& link = c1.documents[i].link;
    if (link.empty()) continue;
    if (auto it = links2.find(link); it != links2.end()) {
      out.hard_links.emplace_back(i, it->second);
    } else {
      out.warnings.push_back(c1.language + " document '" + c1.documents[i].id + "' has unmatched link '" +
                             link + "'");
    }
  }
  for (const auto& doc : c2.documents) {
    if (!doc.link.empty() && !links1.contains(doc.link))
      out.warnings.push_back(c2.language + " document '" + doc.id + "' has unmatched link '" + doc.link + "'");
  }
  for (const auto& w : out.warnings) spdlog::warn("{}", w);
  out.side1 = std::move(c1);
  out.side2 = std::move(c2);
  return out;
}

}  // namespace mltm
