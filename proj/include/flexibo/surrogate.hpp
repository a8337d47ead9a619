#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "flexibo/execution.hpp"

namespace flexibo {

struct Prediction {
  double mean = 0.0;
  double std = 0.0;
};

/// Per-point predictions for the two objectives.
using PointPrediction = std::array<Prediction, 2>;

class SurrogateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Squared-exponential kernel with per-dimension length-scales.
struct KernelParams {
  std::vector<double> length_scales;
  double signal_variance = 1.0;
  double noise_variance = 1e-6;

  static KernelParams defaults(std::size_t dims) {
    return KernelParams{std::vector<double>(dims, 0.2), 1.0, 1e-6};
  }
  double operator()(std::span<const double> a, std::span<const double> b) const;
};

inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-4;

/// Exact GP regression with a zero-mean prior. The Cholesky factor of
/// K + (noise + jitter) I is cached at fit time; jitter starts at 1e-10 and
/// grows by 10x up to 1e-4 before fitting fails.
class GaussianProcess {
 public:
  /// Rows of X are inputs. Duplicate rows are collapsed by averaging their
  /// targets.
  static GaussianProcess fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, KernelParams params);

  Prediction predict(std::span<const double> x) const;
  /// Predicts every row of X into out (out.size() == X.rows()).
  void predict_batch(const Eigen::MatrixXd& X, std::span<Prediction> out,
                     Execution exec = Execution::parallel) const;

  double log_marginal_likelihood() const { return log_marginal_likelihood_; }
  double jitter() const { return jitter_; }
  const KernelParams& params() const { return params_; }
  std::size_t dimensions() const { return static_cast<std::size_t>(train_x_.cols()); }
  std::size_t training_size() const { return static_cast<std::size_t>(train_x_.rows()); }

 private:
  GaussianProcess() = default;

  KernelParams params_;
  Eigen::MatrixXd train_x_;
  Eigen::VectorXd train_y_;
  Eigen::MatrixXd chol_;  // lower-triangular factor
  Eigen::VectorXd alpha_;  // (K + s^2 I)^{-1} y
  double jitter_ = 0.0;
  double log_marginal_likelihood_ = 0.0;
};

/// Coordinate-wise grid search over per-dimension length-scales and the
/// noise variance, maximizing the log marginal likelihood. Deterministic;
/// returns `start` unchanged when no candidate fits.
KernelParams select_hyperparameters(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                    const KernelParams& start);

struct ForestOptions {
  std::size_t trees = 25;
  std::size_t min_leaf = 2;
};

/// Bagged regression trees with variance-reduction splits. The forest mean
/// is the average of per-tree predictions and the uncertainty is their
/// population standard deviation (divisor = tree count).
class RandomForest {
 public:
  static RandomForest fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, ForestOptions options,
                          std::uint64_t seed);

  Prediction predict(std::span<const double> x) const;
  void predict_batch(const Eigen::MatrixXd& X, std::span<Prediction> out,
                     Execution exec = Execution::parallel) const;
  std::vector<double> tree_predictions(std::span<const double> x) const;

  std::size_t tree_count() const { return trees_.size(); }
  std::size_t dimensions() const { return dims_; }

  struct Node {
    // Leaf when feature < 0. Inputs with x[feature] <= threshold go left.
    int feature = -1;
    double threshold = 0.0;
    double value = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
  };
  using Tree = std::vector<Node>;

  const std::vector<Tree>& trees() const { return trees_; }
  static double evaluate_tree(const Tree& tree, std::span<const double> x);

 private:
  RandomForest() = default;
  std::vector<Tree> trees_;
  std::size_t dims_ = 0;
};

/// A measured value for one objective of one design point.
struct Observation {
  std::size_t flat_id = 0;
  std::size_t objective = 0;  // 0 or 1
  double value = 0.0;
};

/// Measured (point, objective) pairs take their measured value with zero
/// uncertainty; unmeasured objectives keep the model prediction.
void posterior_override(std::span<PointPrediction> predictions, std::span<const Observation> evaluated);

}  // namespace flexibo
