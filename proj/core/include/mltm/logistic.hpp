#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mltm {

/// Dense row-major feature matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  void push_row(std::span<const double> values);
  FeatureMatrix select(std::span<const std::size_t> indices) const;
};

struct LogisticOptions {
  /// L2 penalty on the weights (not the bias), added as l2/2 * |w|^2 to the summed loss.
  double l2 = 1.0;
  std::size_t epochs = 500;
  /// Fixed gradient step; 0 picks 1/L for the mean objective's smoothness bound L.
  double step = 0.0;
};

/// Binary logistic regression trained by full-batch gradient descent from zero.
///
/// Objective (divided by n so the step size does not depend on n):
///   J(w, b) = (1/n) [ sum_i log(1 + exp(z_i)) - y_i z_i  +  l2/2 |w|^2 ],  z_i = w.x_i + b
class LogisticRegression {
 public:
  explicit LogisticRegression(LogisticOptions options = {}) : options_(options) {}

  void fit(const FeatureMatrix& x, std::span<const int> y);
  double predict_proba(std::span<const double> features) const;
  int predict(std::span<const double> features) const { return predict_proba(features) >= 0.5 ? 1 : 0; }
  double accuracy(const FeatureMatrix& x, std::span<const int> y) const;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

  /// Objective and gradient at params = (w_1..w_d, b); exposed for gradient checks.
  static double objective(std::span<const double> params, const FeatureMatrix& x, std::span<const int> y, double l2);
  static void gradient(std::span<const double> params, const FeatureMatrix& x, std::span<const int> y, double l2,
                       std::span<double> grad);

 private:
  LogisticOptions options_;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

/// Stratified k-fold cross-validation. Rows of each class are shuffled with
/// `seed` (from their given order) and dealt round-robin into folds. Returns
/// the mean held-out accuracy over folds.
double cross_validated_accuracy(const FeatureMatrix& x, std::span<const int> y, std::size_t folds,
                                std::uint64_t seed, const LogisticOptions& options = {});

/// Stratified fold assignment used by cross_validated_accuracy.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t folds, std::uint64_t seed);

}  // namespace mltm
