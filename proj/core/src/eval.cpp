#include "mltm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "mltm/error.hpp"
#include "mltm/parallel.hpp"

namespace mltm {

using nlohmann::json;

std::vector<WordId> top_words(std::span<const double> phi_row, std::size_t c) {
  if (c > phi_row.size())
    throw ConfigError("asked for " + std::to_string(c) + " top words from a vocabulary of " +
                      std::to_string(phi_row.size()));
  std::vector<WordId> ids(phi_row.size());
  std::iota(ids.begin(), ids.end(), WordId{0});
  const auto by_prob = [&](WordId a, WordId b) { return phi_row[a] != phi_row[b] ? phi_row[a] > phi_row[b] : a < b; };
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(c), ids.end(), by_prob);
  ids.resize(c);
  return ids;
}

std::vector<ReferenceRecord> read_reference_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open reference corpus " + path.string());
  std::vector<ReferenceRecord> records;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = json::parse(text);
      ReferenceRecord r;
      r.l1_types = j.at("l1_types").get<std::vector<std::string>>();
      r.l2_types = j.at("l2_types").get<std::vector<std::string>>();
      if (r.l1_types.empty() || r.l2_types.empty())
        throw DataError("reference line " + std::to_string(line) + ": both sides must be non-empty");
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError("reference line " + std::to_string(line) + ": " + e.what());
    }
  }
  if (records.empty()) throw DataError("reference corpus " + path.string() + " is empty");
  return records;
}

void write_reference_records(const std::filesystem::path& path, const std::vector<ReferenceRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : records) out << json{{"l1_types", r.l1_types}, {"l2_types", r.l2_types}}.dump() << '\n';
}

namespace {

std::vector<WordId> encode_types(const std::vector<std::string>& types, const Vocabulary& vocab) {
  std::vector<WordId> ids;
  for (const auto& t : types)
    if (auto id = vocab.find(t)) ids.push_back(*id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

}  // namespace

ReferenceCorpus encode_reference(const std::vector<ReferenceRecord>& records, const Vocabulary& v1,
                                 const Vocabulary& v2) {
  ReferenceCorpus ref;
  for (const auto& r : records) {
    ref.side1.push_back(encode_types(r.l1_types, v1));
    ref.side2.push_back(encode_types(r.l2_types, v2));
  }
  return ref;
}

ReferenceCorpus load_reference(const std::filesystem::path& path, const Vocabulary& v1, const Vocabulary& v2) {
  return encode_reference(read_reference_records(path), v1, v2);
}

CooccurrenceIndex::CooccurrenceIndex(const ReferenceCorpus& ref) : pairs_(ref.size()) {
  if (ref.side1.size() != ref.side2.size()) throw InternalError("reference sides differ in length");
  for (int side = 0; side < 2; ++side) {
    const auto& docs = side == 0 ? ref.side1 : ref.side2;
    auto& postings = postings_[side];
    for (std::size_t p = 0; p < docs.size(); ++p)
      for (WordId w : docs[p]) {
        if (w >= postings.size()) postings.resize(w + 1);
        postings[w].push_back(static_cast<std::uint32_t>(p));
      }
  }
}

std::size_t CooccurrenceIndex::doc_freq(int side, WordId w) const {
  const auto& postings = postings_[side];
  return w < postings.size() ? postings[w].size() : 0;
}

std::size_t CooccurrenceIndex::joint(WordId w1, WordId w2) const {
  if (w1 >= postings_[0].size() || w2 >= postings_[1].size()) return 0;
  const auto& a = postings_[0][w1];
  const auto& b = postings_[1][w2];
  std::size_t i = 0, j = 0, n = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double npmi(std::size_t joint, std::size_t count1, std::size_t count2, std::size_t pairs) {
  if (pairs == 0) throw ConfigError("NPMI needs a non-empty reference corpus");
  if (count1 == 0 || count2 == 0) return 0.0;
  if (joint == 0) return -1.0;
  if (joint == pairs) return 1.0;
  const double lj = std::log(static_cast<double>(joint));
  const double denominator = std::log(static_cast<double>(pairs)) - lj;
  // Written so that joint == count1 == count2 gives numerator == denominator exactly.
  const double numerator =
      denominator + (lj - std::log(static_cast<double>(count1))) + (lj - std::log(static_cast<double>(count2)));
  return std::clamp(numerator / denominator, -1.0, 1.0);
}

double cnpmi_topic(std::span<const WordId> words1, std::span<const WordId> words2, const CooccurrenceIndex& index) {
  if (words1.empty() || words2.empty()) throw ConfigError("CNPMI needs at least one top word per language");
  if (index.pairs() == 0) throw ConfigError("CNPMI needs a non-empty reference corpus");
  double sum = 0.0;
  for (WordId a : words1) {
    const auto c1 = index.doc_freq(0, a);
    for (WordId b : words2) sum += npmi(index.joint(a, b), c1, index.doc_freq(1, b), index.pairs());
  }
  return sum / static_cast<double>(words1.size() * words2.size());
}

double cnpmi_topic(std::span<const WordId> words1, std::span<const WordId> words2, const ReferenceCorpus& ref) {
  return cnpmi_topic(words1, words2, CooccurrenceIndex(ref));
}

CnpmiResult cnpmi_model(const TopicModel& model, const ReferenceCorpus& ref, std::size_t c) {
  const CooccurrenceIndex index(ref);
  const std::size_t K = model.topics();
  CnpmiResult result;
  result.per_topic.assign(K, 0.0);
  parallel_for(K, [&](std::size_t k) {
    const auto w1 = top_words(model.phi_row(0, k), c);
    const auto w2 = top_words(model.phi_row(1, k), c);
    result.per_topic[k] = cnpmi_topic(w1, w2, index);
  });
  result.mean = std::accumulate(result.per_topic.begin(), result.per_topic.end(), 0.0) / static_cast<double>(K);
  return result;
}

double micro_f1(std::size_t tp, std::size_t fp, std::size_t fn) {
  const std::size_t den = 2 * tp + fp + fn;
  return den == 0 ? 1.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

namespace {

std::vector<int> indicator(const std::vector<std::vector<std::string>>& labels, const std::string& label) {
  std::vector<int> y(labels.size(), 0);
  for (std::size_t i = 0; i < labels.size(); ++i)
    y[i] = std::find(labels[i].begin(), labels[i].end(), label) != labels[i].end() ? 1 : 0;
  return y;
}

struct Tally {
  std::size_t tp = 0, fp = 0, fn = 0;
  void add(int predicted, int gold) {
    tp += predicted && gold;
    fp += predicted && !gold;
    fn += !predicted && gold;
  }
};

// Threshold maximizing this label's F1 over out-of-fold probabilities; ties go to the lower threshold.
double tune_threshold(const FeatureMatrix& x, const std::vector<int>& y, const ClassifyOptions& options) {
  const std::size_t folds = std::min(options.folds, x.rows);
  if (folds < 2) return options.threshold;
  const auto fold = stratified_folds(y, folds, options.seed);
  std::vector<double> proba(x.rows, 0.0);
  parallel_for(folds, [&](std::size_t f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < x.rows; ++i) (fold[i] == f ? test : train).push_back(i);
    if (train.empty() || test.empty()) return;
    std::vector<int> y_train;
    for (auto i : train) y_train.push_back(y[i]);
    LogisticRegression model(options.logistic);
    model.fit(x.select(train), y_train);
    for (auto i : test) proba[i] = model.predict_proba(x.row(i));
  });
  double best = options.threshold;
  double best_f1 = -1.0;
  for (int step = 1; step < 20; ++step) {
    const double t = 0.05 * step;
    Tally tally;
    for (std::size_t i = 0; i < x.rows; ++i) tally.add(proba[i] >= t, y[i]);
    const double f1 = micro_f1(tally.tp, tally.fp, tally.fn);
    if (f1 > best_f1) {
      best_f1 = f1;
      best = t;
    }
  }
  return best;
}

}  // namespace

ClassificationResult classify_crosslingual(const LabeledThetas& train, const LabeledThetas& test,
                                           const ClassifyOptions& options) {
  if (train.theta.rows != train.labels.size() || test.theta.rows != test.labels.size())
    throw ConfigError("theta rows and label lists differ in length");
  if (train.theta.rows == 0 || test.theta.rows == 0) throw ConfigError("classification needs documents on both sides");
  if (train.theta.cols != test.theta.cols) throw ConfigError("train and test thetas have different topic counts");

  std::map<std::string, std::size_t> train_freq;
  for (const auto& ls : train.labels)
    for (const auto& l : ls) ++train_freq[l];
  std::map<std::string, std::size_t> test_labels;
  for (const auto& ls : test.labels)
    for (const auto& l : ls) ++test_labels[l];

  ClassificationResult result;
  for (const auto& [label, n] : train_freq) result.labels.push_back(label);
  for (const auto& [label, n] : test_labels)
    if (!train_freq.contains(label)) {
      spdlog::warn("label '{}' has no positive training examples; dropped", label);
      result.dropped_labels.push_back(label);
    }
  if (result.labels.empty()) throw ConfigError("training documents carry no labels");

  std::vector<std::vector<int>> predicted(result.labels.size());
  result.thresholds.assign(result.labels.size(), options.threshold);
  parallel_for(result.labels.size(), [&](std::size_t li) {
    const auto y = indicator(train.labels, result.labels[li]);
    if (options.tune_thresholds) result.thresholds[li] = tune_threshold(train.theta, y, options);
    LogisticRegression model(options.logistic);
    model.fit(train.theta, y);
    auto& pred = predicted[li];
    pred.resize(test.theta.rows);
    for (std::size_t i = 0; i < test.theta.rows; ++i)
      pred[i] = model.predict_proba(test.theta.row(i)) >= result.thresholds[li] ? 1 : 0;
  });

  // Majority label: most frequent in training, ties by name.
  std::string majority = result.labels.front();
  for (const auto& [label, n] : train_freq)
    if (n > train_freq[majority]) majority = label;

  Tally model_tally, majority_tally;
  for (std::size_t li = 0; li < result.labels.size(); ++li) {
    const auto gold = indicator(test.labels, result.labels[li]);
    const int majority_pred = result.labels[li] == majority ? 1 : 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      model_tally.add(predicted[li][i], gold[i]);
      majority_tally.add(majority_pred, gold[i]);
    }
  }
  result.tp = model_tally.tp;
  result.fp = model_tally.fp;
  result.fn = model_tally.fn;
  result.f1_micro = micro_f1(model_tally.tp, model_tally.fp, model_tally.fn);
  result.majority_baseline_f1 = micro_f1(majority_tally.tp, majority_tally.fp, majority_tally.fn);
  return result;
}

LabeledThetas labeled_thetas(const TopicModel& model, int side, const Corpus& corpus) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& d : corpus.documents) by_id.emplace(d.id, &d);
  LabeledThetas out;
  const std::size_t K = model.topics();
  out.theta = FeatureMatrix(0, K);
  for (std::size_t d = 0; d < model.doc_ids[side].size(); ++d) {
    const auto it = by_id.find(model.doc_ids[side][d]);
    if (it == by_id.end()) throw DataError("model document '" + model.doc_ids[side][d] + "' is not in the corpus");
    out.theta.push_row(model.theta_row(side, d));
    out.labels.push_back(it->second->labels);
  }
  return out;
}

namespace {

json classification_json(const ClassificationResult& r) {
  return {{"f1_micro", r.f1_micro},
          {"tp", r.tp},
          {"fp", r.fp},
          {"fn", r.fn},
          {"labels", r.labels},
          {"dropped_labels", r.dropped_labels},
          {"thresholds", r.thresholds},
          {"majority_baseline_f1", r.majority_baseline_f1}};
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  json j;
  j["model_kind"] = report.model_kind;
  j["classifier"] = report.classifier;
  j["top_words"] = report.top_words;
  if (report.cnpmi) {
    j["cnpmi_per_topic"] = report.cnpmi->per_topic;
    j["cnpmi_mean"] = report.cnpmi->mean;
  }
  if (report.classify_1to2 || report.classify_2to1) {
    json f1 = json::object();
    if (report.classify_1to2) f1["l1_to_l2"] = classification_json(*report.classify_1to2);
    if (report.classify_2to1) f1["l2_to_l1"] = classification_json(*report.classify_2to1);
    j["classification"] = std::move(f1);
  }
  if (report.lis_final) j["lis_final"] = *report.lis_final;
  return j.dump(2);
}

}  // namespace mltm
