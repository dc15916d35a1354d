#include "mltm/schedule.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "json.hpp"
#include "mltm/error.hpp"

namespace mltm {

using nlohmann::json;

std::vector<double> concept_topic_distribution(const LanguageCounts& counts, WordId word, double beta) {
  const auto row = counts.word_topic(word);
  std::vector<double> p(row.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    p[k] = static_cast<double>(row[k]) + beta;
    sum += p[k];
  }
  if (!(sum > 0.0)) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(p.size()));
    return p;
  }
  for (auto& x : p) x /= sum;
  return p;
}

ConceptFeatures concept_features(const CountState& state, const BilingualDictionary& dict, double beta) {
  std::vector<Concept> ordered = dict.concepts();
  std::sort(ordered.begin(), ordered.end());
  ConceptFeatures f;
  f.x = FeatureMatrix(0, state.sides[0].topics());
  for (const auto& c : ordered) {
    f.x.push_row(concept_topic_distribution(state.sides[0], c.word1, beta));
    f.language.push_back(0);
    f.x.push_row(concept_topic_distribution(state.sides[1], c.word2, beta));
    f.language.push_back(1);
  }
  return f;
}

double compute_lis(const ConceptFeatures& features, std::size_t folds, std::uint64_t seed) {
  if (features.x.rows < 4 * folds)
    throw ConfigError("language identification needs at least " + std::to_string(2 * folds) + " concepts");
  return cross_validated_accuracy(features.x, features.language, folds, seed);
}

double compute_lis(const CountState& state, const BilingualDictionary& dict, double beta, std::size_t folds,
                   std::uint64_t seed) {
  if (dict.size() < 2 * folds)
    throw ConfigError("language identification needs at least " + std::to_string(2 * folds) + " concepts");
  return compute_lis(concept_features(state, dict, beta), folds, seed);
}

void LisHistory::record(std::size_t iteration, double lis) {
  if (!(lis >= 0.0 && lis <= 1.0)) throw InternalError("LIS outside [0, 1]");
  values_.emplace_back(iteration, lis);
}

std::optional<double> LisHistory::mean(std::size_t from, std::size_t to) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [t, v] : values_) {
    if (t > from && t <= to) {
      sum += v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

bool should_anneal(const LisHistory& history, std::size_t t) {
  const std::size_t I = history.window();
  if (t < 2 * I) throw ConfigError("should_anneal needs t >= 2I");
  const auto recent = history.mean(t - I, t);
  const auto previous = history.mean(t - 2 * I, t - I);
  if (!recent || !previous) throw ConfigError("insufficient LIS history at iteration " + std::to_string(t));
  return *recent > *previous;
}

AnnealScheduler::AnnealScheduler(AnnealConfig config) : config_(config), history_(config.interval) {
  config_.validate();
}

bool AnnealScheduler::after_iteration(std::size_t t, const std::function<double()>& lis) {
  last_lis_.reset();
  switch (config_.schedule) {
    case AnnealSchedule::kNone:
      return false;
    case AnnealSchedule::kFixed:
      return t % config_.interval == 0 && t <= config_.stop_iteration;
    case AnnealSchedule::kAdaptive: {
      if (t % config_.lis_every == 0) {
        const double score = lis();
        history_.record(t, score);
        last_lis_ = score;
      }
      if (t % config_.interval != 0 || t < 2 * config_.interval || t > config_.stop_iteration) return false;
      if (!history_.mean(t - config_.interval, t) || !history_.mean(t - 2 * config_.interval, t - config_.interval))
        return false;
      return should_anneal(history_, t);
    }
  }
  return false;
}

void AnnealScheduler::log_event(std::size_t t, std::size_t rows_annealed, double max_weight_mean) {
  events_.push_back({t, config_.schedule, last_lis_, rows_annealed, max_weight_mean});
}

void write_anneal_log(const std::filesystem::path& path, const std::vector<AnnealEvent>& events) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& e : events) {
    json j;
    j["iteration"] = e.iteration;
    j["mode"] = to_string(e.mode);
    if (e.lis) j["lis"] = *e.lis;
    j["rows_annealed"] = e.rows_annealed;
    j["max_weight_mean"] = e.max_weight_mean;
    out << j.dump() << '\n';
  }
}

std::vector<AnnealEvent> read_anneal_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<AnnealEvent> events;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    try {
      const auto j = json::parse(text);
      AnnealEvent e;
      e.iteration = j.at("iteration").get<std::size_t>();
      e.mode = parse_anneal_schedule(j.at("mode").get<std::string>());
      if (j.contains("lis")) e.lis = j.at("lis").get<double>();
      e.rows_annealed = j.at("rows_annealed").get<std::size_t>();
      e.max_weight_mean = j.at("max_weight_mean").get<double>();
      events.push_back(e);
    } catch (const json::exception& ex) {
      throw DataError("anneal log line " + std::to_string(line) + ": " + ex.what());
    }
  }
  return events;
}

}  // namespace mltm
