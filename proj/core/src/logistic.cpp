#include "mltm/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mltm/error.hpp"
#include "mltm/parallel.hpp"
#include "mltm/rng.hpp"

namespace mltm {

void FeatureMatrix::push_row(std::span<const double> values) {
  if (rows == 0 && cols == 0) cols = values.size();
  if (values.size() != cols) throw ConfigError("feature row has wrong width");
  data.insert(data.end(), values.begin(), values.end());
  ++rows;
}

FeatureMatrix FeatureMatrix::select(std::span<const std::size_t> indices) const {
  FeatureMatrix out(indices.size(), cols);
  for (std::size_t i = 0; i < indices.size(); ++i) std::copy_n(row(indices[i]).begin(), cols, out.row(i).begin());
  return out;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double linear(std::span<const double> params, std::span<const double> x) {
  double z = params[x.size()];
  for (std::size_t j = 0; j < x.size(); ++j) z += params[j] * x[j];
  return z;
}

}  // namespace

double LogisticRegression::objective(std::span<const double> params, const FeatureMatrix& x, std::span<const int> y,
                                     double l2) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double z = linear(params, x.row(i));
    loss += softplus(z) - y[i] * z;
  }
  double norm = 0.0;
  for (std::size_t j = 0; j < x.cols; ++j) norm += params[j] * params[j];
  return (loss + 0.5 * l2 * norm) / static_cast<double>(x.rows);
}

void LogisticRegression::gradient(std::span<const double> params, const FeatureMatrix& x, std::span<const int> y,
                                  double l2, std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto row = x.row(i);
    const double err = sigmoid(linear(params, row)) - y[i];
    for (std::size_t j = 0; j < x.cols; ++j) grad[j] += err * row[j];
    grad[x.cols] += err;
  }
  const double n = static_cast<double>(x.rows);
  for (std::size_t j = 0; j < x.cols; ++j) grad[j] = (grad[j] + l2 * params[j]) / n;
  grad[x.cols] /= n;
}

void LogisticRegression::fit(const FeatureMatrix& x, std::span<const int> y) {
  if (x.rows == 0 || y.size() != x.rows) throw ConfigError("logistic regression needs matching non-empty data");
  std::vector<double> params(x.cols + 1, 0.0);
  std::vector<double> grad(x.cols + 1, 0.0);
  double step = options_.step;
  if (step <= 0.0) {
    double max_sq = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
      double sq = 1.0;
      for (double v : x.row(i)) sq += v * v;
      max_sq = std::max(max_sq, sq);
    }
    step = 1.0 / (0.25 * max_sq + options_.l2 / static_cast<double>(x.rows));
  }
  for (std::size_t epoch = 0; epoch < options_.epochs; ++epoch) {
    gradient(params, x, y, options_.l2, grad);
    for (std::size_t j = 0; j < params.size(); ++j) params[j] -= step * grad[j];
  }
  weights_.assign(params.begin(), params.end() - 1);
  bias_ = params.back();
}

double LogisticRegression::predict_proba(std::span<const double> features) const {
  double z = bias_;
  for (std::size_t j = 0; j < features.size(); ++j) z += weights_[j] * features[j];
  return sigmoid(z);
}

double LogisticRegression::accuracy(const FeatureMatrix& x, std::span<const int> y) const {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < x.rows; ++i) correct += predict(x.row(i)) == y[i];
  return static_cast<double>(correct) / static_cast<double>(x.rows);
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < y.size(); ++i) by_class[y[i]].push_back(i);
  std::vector<std::size_t> fold(y.size(), 0);
  Rng rng(Rng::mix64(seed));
  std::size_t offset = 0;
  for (auto& [label, members] : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[rng.below(i)]);
    // Continue dealing where the previous class stopped so fold sizes stay balanced.
    for (std::size_t i = 0; i < members.size(); ++i) fold[members[i]] = (offset + i) % folds;
    offset += members.size();
  }
  return fold;
}

double cross_validated_accuracy(const FeatureMatrix& x, std::span<const int> y, std::size_t folds,
                                std::uint64_t seed, const LogisticOptions& options) {
  if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (x.rows < folds) throw ConfigError("fewer rows than folds");
  const auto fold = stratified_folds(y, folds, seed);
  std::vector<double> accuracy(folds, 0.0);
  parallel_for(folds, [&](std::size_t f) {
    std::vector<std::size_t> train, test;
    for (std::size_t i = 0; i < x.rows; ++i) (fold[i] == f ? test : train).push_back(i);
    std::vector<int> y_train, y_test;
    for (auto i : train) y_train.push_back(y[i]);
    for (auto i : test) y_test.push_back(y[i]);
    LogisticRegression model(options);
    model.fit(x.select(train), y_train);
    accuracy[f] = model.accuracy(x.select(test), y_test);
  });
  double sum = 0.0;
  for (double a : accuracy) sum += a;
  return sum / static_cast<double>(folds);
}

}  // namespace mltm
