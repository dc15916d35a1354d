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
#include "mltm/logistic.hpp"
#include "mltm/model.hpp"

namespace mltm {

/// The C highest-probability word ids, ties broken by ascending id.
std::vector<WordId> top_words(std::span<const double> phi_row, std::size_t c = 20);

/// Parallel reference documents reduced to their word types, encoded against
/// the model vocabularies. Types missing from a vocabulary are dropped; the
/// pair still counts toward R.
struct ReferenceCorpus {
  std::vector<std::vector<WordId>> side1;  // sorted, unique
  std::vector<std::vector<WordId>> side2;

  std::size_t size() const { return side1.size(); }
};

struct ReferenceRecord {
  std::vector<std::string> l1_types;
  std::vector<std::string> l2_types;
};

/// JSON lines {"l1_types": [...], "l2_types": [...]}; a record with an empty side is a DataError.
std::vector<ReferenceRecord> read_reference_records(const std::filesystem::path& path);
void write_reference_records(const std::filesystem::path& path, const std::vector<ReferenceRecord>& records);
ReferenceCorpus encode_reference(const std::vector<ReferenceRecord>& records, const Vocabulary& v1,
                                 const Vocabulary& v2);
ReferenceCorpus load_reference(const std::filesystem::path& path, const Vocabulary& v1, const Vocabulary& v2);

/// Per-side inverted index of reference pairs, shared read-only across topics.
class CooccurrenceIndex {
 public:
  explicit CooccurrenceIndex(const ReferenceCorpus& ref);

  std::size_t pairs() const { return pairs_; }
  std::size_t doc_freq(int side, WordId w) const;
  /// Number of pairs holding w1 on the first side and w2 on the second.
  std::size_t joint(WordId w1, WordId w2) const;

 private:
  std::size_t pairs_ = 0;
  std::array<std::vector<std::vector<std::uint32_t>>, 2> postings_;
};

/// NPMI = PMI / (-log p_joint) from pair counts out of R pairs. Zero joint
/// count gives -1, a zero marginal gives 0, and p_joint = 1 gives 1.
double npmi(std::size_t joint, std::size_t count1, std::size_t count2, std::size_t pairs);

/// Mean NPMI over all |words1| x |words2| cross-language pairs.
double cnpmi_topic(std::span<const WordId> words1, std::span<const WordId> words2, const CooccurrenceIndex& index);
double cnpmi_topic(std::span<const WordId> words1, std::span<const WordId> words2, const ReferenceCorpus& ref);

struct CnpmiResult {
  std::vector<double> per_topic;
  double mean = 0.0;
};

/// Scores topic k with the top C words of each language's phi row k.
CnpmiResult cnpmi_model(const TopicModel& model, const ReferenceCorpus& ref, std::size_t c = 20);

/// Pooled micro-F1 = 2TP / (2TP + FP + FN); 1.0 when all three are zero.
double micro_f1(std::size_t tp, std::size_t fp, std::size_t fn);

struct LabeledThetas {
  FeatureMatrix theta;
  std::vector<std::vector<std::string>> labels;
};

struct ClassifyOptions {
  double threshold = 0.5;
  /// Pick each label's threshold by cross-validation on the training side.
  bool tune_thresholds = false;
  std::size_t folds = 5;
  std::uint64_t seed = 1;
  LogisticOptions logistic{.l2 = 1.0, .epochs = 2000, .step = 0.0};
};

struct ClassificationResult {
  double f1_micro = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<std::string> labels;
  std::vector<std::string> dropped_labels;
  std::vector<double> thresholds;
  /// Micro-F1 of predicting the most frequent training label for every test document.
  double majority_baseline_f1 = 0.0;
};

/// One-vs-rest logistic classifiers trained on `train`, scored on `test`.
ClassificationResult classify_crosslingual(const LabeledThetas& train, const LabeledThetas& test,
                                           const ClassifyOptions& options = {});

/// Thetas of one model side with the document labels of `corpus` (matched by doc id).
LabeledThetas labeled_thetas(const TopicModel& model, int side, const Corpus& corpus);

struct EvalReport {
  std::optional<CnpmiResult> cnpmi;
  std::optional<ClassificationResult> classify_1to2;
  std::optional<ClassificationResult> classify_2to1;
  std::optional<double> lis_final;
  std::string model_kind;
  std::string classifier = "one-vs-rest logistic regression (substitute for SVM)";
  std::size_t top_words = 20;
};

std::string report_to_json(const EvalReport& report);

}  // namespace mltm
