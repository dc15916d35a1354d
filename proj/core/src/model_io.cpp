#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mltm/error.hpp"
#include "mltm/model.hpp"

namespace mltm {

using nlohmann::json;

namespace {

constexpr const char* kKindNames[] = {"lda", "hardlink", "softlink", "voclink", "softlink+voclink"};

json hyperparams_json(const Hyperparams& hp) {
  return {{"topics", hp.topics},
          {"alpha", hp.alpha},
          {"beta", hp.beta},
          {"beta_root", hp.beta_root},
          {"beta_internal", hp.beta_internal},
          {"train_iterations", hp.train_iterations},
          {"infer_iterations", hp.infer_iterations},
          {"seed", hp.seed}};
}

Hyperparams hyperparams_from(const json& j) {
  Hyperparams hp;
  hp.topics = j.at("topics").get<std::size_t>();
  hp.alpha = j.at("alpha").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.beta_root = j.at("beta_root").get<double>();
  hp.beta_internal = j.at("beta_internal").get<double>();
  hp.train_iterations = j.at("train_iterations").get<std::size_t>();
  hp.infer_iterations = j.at("infer_iterations").get<std::size_t>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  return hp;
}

json matrix_rows(const std::vector<double>& flat, std::size_t rows, std::size_t cols) {
  json out = json::array();
  for (std::size_t r = 0; r < rows; ++r)
    out.push_back(std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(r * cols),
                                      flat.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols)));
  return out;
}

std::vector<double> flatten_rows(const json& rows, std::size_t expect_rows, std::size_t cols, const char* what) {
  if (!rows.is_array() || rows.size() != expect_rows)
    throw DataError(std::string(what) + " has " + std::to_string(rows.size()) + " rows, expected " +
                    std::to_string(expect_rows));
  std::vector<double> flat;
  flat.reserve(expect_rows * cols);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != cols)
      throw DataError(std::string(what) + " row has the wrong length");
    for (const auto& v : row) flat.push_back(v.get<double>());
  }
  return flat;
}

void check_distribution_rows(const std::vector<double>& flat, std::size_t cols, const char* what) {
  if (cols == 0) return;
  for (std::size_t r = 0; r * cols < flat.size(); ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = flat[r * cols + c];
      if (!std::isfinite(v) || v < 0.0) throw DataError(std::string(what) + " holds a negative or non-finite value");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw DataError(std::string(what) + " row " + std::to_string(r) + " does not sum to 1");
  }
}

}  // namespace

std::string to_string(ModelKind kind) { return kKindNames[static_cast<int>(kind)]; }

ModelKind parse_model_kind(const std::string& text) {
  for (int i = 0; i < 5; ++i)
    if (text == kKindNames[i]) return static_cast<ModelKind>(i);
  throw ConfigError("unknown model kind '" + text + "' (expected lda, hardlink, softlink, voclink, softlink+voclink)");
}

std::string serialize_model(const TopicModel& model, bool include_counts) {
  const std::size_t K = model.topics();
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["model_kind"] = to_string(model.kind);
  doc["hyperparams"] = hyperparams_json(model.hyperparams);
  json languages = json::array();
  for (int side = 0; side < 2; ++side) {
    const auto& vocab = model.vocabularies[side];
    json lang;
    lang["language"] = vocab.language();
    lang["vocabulary"] = vocab.words();
    lang["doc_ids"] = model.doc_ids[side];
    lang["phi"] = matrix_rows(model.phi[side], K, vocab.size());
    lang["theta"] = matrix_rows(model.theta[side], model.doc_ids[side].size(), K);
    if (include_counts && model.word_topic_counts) lang["word_topic_counts"] = (*model.word_topic_counts)[side];
    languages.push_back(std::move(lang));
  }
  doc["languages"] = std::move(languages);
  const auto& p = model.provenance;
  doc["provenance"] = {{"seed", p.seed},
                       {"iterations", p.iterations},
                       {"schedule", p.schedule},
                       {"anneal_events", p.anneal_events},
                       {"hardlink_formulation", p.hardlink_formulation}};
  return doc.dump();
}

void save_model(const std::filesystem::path& path, const TopicModel& model, bool include_counts) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << serialize_model(model, include_counts) << '\n';
}

TopicModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path.string());
  TopicModel model;
  try {
    const json doc = json::parse(in);
    if (doc.at("format_version").get<int>() != kModelFormatVersion)
      throw DataError("unsupported model format_version in " + path.string());
    try {
      model.kind = parse_model_kind(doc.at("model_kind").get<std::string>());
      model.hyperparams = hyperparams_from(doc.at("hyperparams"));
      model.hyperparams.validate();
    } catch (const ConfigError& e) {
      throw DataError(path.string() + ": " + e.what());
    }
    const std::size_t K = model.topics();
    const auto& languages = doc.at("languages");
    if (!languages.is_array() || languages.size() != 2) throw DataError("a model holds exactly two languages");
    std::array<std::vector<Count>, 2> counts;
    bool have_counts = true;
    for (int side = 0; side < 2; ++side) {
      const auto& lang = languages[static_cast<std::size_t>(side)];
      Vocabulary vocab(lang.at("language").get<std::string>());
      for (const auto& w : lang.at("vocabulary")) vocab.add(w.get<std::string>());
      if (vocab.size() != lang.at("vocabulary").size())
        throw DataError("duplicate words in the vocabulary of " + path.string());
      model.doc_ids[side] = lang.at("doc_ids").get<std::vector<std::string>>();
      model.phi[side] = flatten_rows(lang.at("phi"), K, vocab.size(), "phi");
      model.theta[side] = flatten_rows(lang.at("theta"), model.doc_ids[side].size(), K, "theta");
      check_distribution_rows(model.phi[side], vocab.size(), "phi");
      check_distribution_rows(model.theta[side], K, "theta");
      if (lang.contains("word_topic_counts")) {
        counts[side] = lang.at("word_topic_counts").get<std::vector<Count>>();
        if (counts[side].size() != vocab.size() * K) throw DataError("word_topic_counts has the wrong size");
      } else {
        have_counts = false;
      }
      model.vocabularies[side] = std::move(vocab);
    }
    if (have_counts) model.word_topic_counts = std::move(counts);
    const auto& p = doc.at("provenance");
    model.provenance.seed = p.at("seed").get<std::uint64_t>();
    model.provenance.iterations = p.at("iterations").get<std::size_t>();
    model.provenance.schedule = p.at("schedule").get<std::string>();
    model.provenance.anneal_events = p.at("anneal_events").get<std::size_t>();
    model.provenance.hardlink_formulation = p.value("hardlink_formulation", "");
  } catch (const json::exception& e) {
    throw DataError("malformed model file " + path.string() + ": " + e.what());
  }
  return model;
}

CountState counts_from_model(const TopicModel& model) {
  if (!model.word_topic_counts) throw DataError("model was saved without word-topic counts");
  const std::size_t K = model.topics();
  CountState state;
  for (int side = 0; side < 2; ++side) {
    const std::size_t V = model.vocabularies[side].size();
    LanguageCounts counts(1, V, K);
    const auto& table = (*model.word_topic_counts)[side];
    for (std::size_t w = 0; w < V; ++w)
      for (std::size_t k = 0; k < K; ++k)
        if (table[w * K + k] != 0) counts.update(0, static_cast<WordId>(w), static_cast<TopicId>(k), table[w * K + k]);
    state.sides[side] = std::move(counts);
  }
  return state;
}

void save_theta(const std::filesystem::path& path, const std::string& language, const std::vector<std::string>& doc_ids,
                const std::vector<double>& theta, std::size_t topics) {
  if (theta.size() != doc_ids.size() * topics) throw InternalError("theta size does not match doc_ids x topics");
  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["language"] = language;
  doc["topics"] = topics;
  doc["doc_ids"] = doc_ids;
  doc["theta"] = matrix_rows(theta, doc_ids.size(), topics);
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump() << '\n';
}

ThetaFile load_theta(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open theta file " + path.string());
  ThetaFile file;
  try {
    const json doc = json::parse(in);
    if (doc.at("format_version").get<int>() != kModelFormatVersion)
      throw DataError("unsupported theta format_version in " + path.string());
    file.language = doc.at("language").get<std::string>();
    file.topics = doc.at("topics").get<std::size_t>();
    file.doc_ids = doc.at("doc_ids").get<std::vector<std::string>>();
    file.theta = flatten_rows(doc.at("theta"), file.doc_ids.size(), file.topics, "theta");
    check_distribution_rows(file.theta, file.topics, "theta");
  } catch (const json::exception& e) {
    throw DataError("malformed theta file " + path.string() + ": " + e.what());
  }
  return file;
}

}  // namespace mltm
