#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mltm {

using WordId = std::uint32_t;

/// Bijection between word strings and dense ids [0, size) for one language.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::string language) : language_(std::move(language)) {}

  /// Returns the id of `word`, inserting it at the end if absent.
  WordId add(std::string_view word);
  std::optional<WordId> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  const std::string& word(WordId id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  const std::string& language() const { return language_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.language_ == b.language_ && a.words_ == b.words_;
  }

 private:
  std::string language_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> ids_;
};

struct Document {
  std::string id;
  std::vector<WordId> tokens;
  std::vector<std::string> labels;
  std::string link;  // empty when the document has no comparable partner

  friend bool operator==(const Document&, const Document&) = default;
};

/// One language's documents, encoded against its vocabulary.
struct Corpus {
  std::string language;
  Vocabulary vocabulary;
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  std::size_t total_tokens() const;
  /// Throws DataError if any token id is outside the vocabulary.
  void validate() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

struct LoaderOptions {
  /// Number of most frequent word types (by token count) removed after stopwords.
  std::size_t remove_top_frequent = 100;
  std::optional<std::filesystem::path> stopwords;
  /// Keep documents left without tokens; otherwise they are dropped with a warning.
  bool keep_empty = false;
};

struct LoadReport {
  std::size_t records = 0;
  std::size_t dropped_empty = 0;
  std::size_t dropped_oov_tokens = 0;
  std::vector<std::string> removed_frequent;
};

/// Reads a JSON-lines corpus and builds its vocabulary after filtering.
Corpus load_corpus(const std::filesystem::path& path, std::string_view language,
                   const LoaderOptions& options = {}, LoadReport* report = nullptr);

/// Builds a corpus from in-memory records with the same filtering as load_corpus.
struct RawDocument {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> labels;
  std::string link;
};
Corpus build_corpus(std::vector<RawDocument> records, std::string_view language,
                    const LoaderOptions& options = {}, LoadReport* report = nullptr);

/// Encodes a held-out JSON-lines file against a training vocabulary; unknown
/// tokens are dropped and empty documents are kept.
Corpus encode_heldout(const std::filesystem::path& path, const Vocabulary& vocabulary,
                      LoadReport* report = nullptr);

std::vector<std::string> read_stopwords(const std::filesystem::path& path);

/// Writes one JSON record per document in the loader's input format.
void write_corpus_jsonl(const std::filesystem::path& path, const Corpus& corpus);

/// Versioned container {format_version, language, vocabulary, documents}.
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);
Corpus read_saved_corpus(const std::filesystem::path& path);

inline constexpr int kCorpusFormatVersion = 1;

/// Two corpora in different languages plus the hard links between them.
struct BilingualCorpus {
  Corpus side1;
  Corpus side2;
  /// (index in side1, index in side2), ordered by side1 index.
  std::vector<std::pair<std::size_t, std::size_t>> hard_links;
  std::vector<std::string> warnings;

  const Corpus& side(int s) const { return s == 0 ? side1 : side2; }
};

/// Links documents whose non-empty link ids match.
BilingualCorpus pair_corpora(Corpus c1, Corpus c2);

}  // namespace mltm
