#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "flexibo/surrogate.hpp"

namespace flexibo {

double KernelParams::operator()(std::span<const double> a, std::span<const double> b) const {
  double r2 = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double z = (a[d] - b[d]) / length_scales[d];
    r2 += z * z;
  }
  return signal_variance * std::exp(-0.5 * r2);
}

namespace {

std::span<const double> row_span(const Eigen::MatrixXd& X, Eigen::Index i, std::vector<double>& buf) {
  buf.resize(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index d = 0; d < X.cols(); ++d) buf[static_cast<std::size_t>(d)] = X(i, d);
  return buf;
}

// Collapses identical input rows, averaging their targets. Order of first
// appearance is kept.
void collapse_duplicates(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, Eigen::MatrixXd& Xu,
                         Eigen::VectorXd& yu) {
  std::map<std::vector<double>, std::size_t> slot;
  std::vector<std::vector<double>> rows;
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index d = 0; d < X.cols(); ++d) r[static_cast<std::size_t>(d)] = X(i, d);
    auto [it, inserted] = slot.try_emplace(r, rows.size());
    if (inserted) {
      rows.push_back(std::move(r));
      sums.push_back(y(i));
      counts.push_back(1);
    } else {
      sums[it->second] += y(i);
      ++counts[it->second];
    }
  }
  Xu.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  yu.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t d = 0; d < rows[i].size(); ++d) Xu(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) = rows[i][d];
    yu(static_cast<Eigen::Index>(i)) = sums[i] / static_cast<double>(counts[i]);
  }
}

}  // namespace

GaussianProcess GaussianProcess::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, KernelParams params) {
  if (X.rows() < 1 || X.rows() != y.size())
    throw SurrogateError("GP fit needs matching, non-empty inputs and targets");
  if (params.length_scales.size() != static_cast<std::size_t>(X.cols()))
    throw SurrogateError("GP length-scale count does not match input dimensionality");
  for (double l : params.length_scales)
    if (!(l > 0.0)) throw SurrogateError("GP length-scales must be positive");
  if (!(params.signal_variance > 0.0) || params.noise_variance < 0.0)
    throw SurrogateError("GP variances must be positive (noise may be zero)");

  GaussianProcess gp;
  gp.params_ = std::move(params);
  collapse_duplicates(X, y, gp.train_x_, gp.train_y_);

  const Eigen::Index n = gp.train_x_.rows();
  Eigen::MatrixXd K(n, n);
  std::vector<double> a, b;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = row_span(gp.train_x_, i, a);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double k = gp.params_(xi, row_span(gp.train_x_, j, b));
      K(i, j) = k;
      K(j, i) = k;
    }
  }

  for (double jitter = kJitterStart; jitter <= kJitterMax * (1.0 + 1e-9); jitter *= 10.0) {
    Eigen::MatrixXd A = K;
    A.diagonal().array() += gp.params_.noise_variance + jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd L = llt.matrixL();
    if (!(L.diagonal().array() > 0.0).all()) continue;
    gp.chol_ = std::move(L);
    gp.jitter_ = jitter;
    gp.alpha_ = llt.solve(gp.train_y_);
    gp.log_marginal_likelihood_ = -0.5 * gp.train_y_.dot(gp.alpha_) -
                                  gp.chol_.diagonal().array().log().sum() -
                                  0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return gp;
  }
  throw SurrogateError("Cholesky factorization failed after jitter escalation to " + std::to_string(kJitterMax));
}

Prediction GaussianProcess::predict(std::span<const double> x) const {
  if (x.size() != dimensions())
    throw std::invalid_argument("GP query has dimension " + std::to_string(x.size()) + ", model expects " +
                                std::to_string(dimensions()));
  const Eigen::Index n = train_x_.rows();
  Eigen::VectorXd kstar(n);
  std::vector<double> buf;
  for (Eigen::Index i = 0; i < n; ++i) kstar(i) = params_(x, row_span(train_x_, i, buf));
  const double mean = kstar.dot(alpha_);
  // v = L^{-1} k*, var = k(x,x) - v.v
  chol_.triangularView<Eigen::Lower>().solveInPlace(kstar);
  const double var = params_.signal_variance - kstar.squaredNorm();
  return Prediction{mean, var > 0.0 ? std::sqrt(var) : 0.0};
}

void GaussianProcess::predict_batch(const Eigen::MatrixXd& X, std::span<Prediction> out, Execution exec) const {
  if (static_cast<std::size_t>(X.rows()) != out.size())
    throw std::invalid_argument("GP batch output size does not match input rows");
  if (static_cast<std::size_t>(X.cols()) != dimensions())
    throw std::invalid_argument("GP batch inputs have the wrong dimensionality");
  const auto rows = static_cast<std::int64_t>(X.rows());
  if (exec == Execution::serial) {
    std::vector<double> buf;
    for (std::int64_t i = 0; i < rows; ++i) out[static_cast<std::size_t>(i)] = predict(row_span(X, i, buf));
    return;
  }
#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) out[static_cast<std::size_t>(i)] = predict(row_span(X, i, buf));
  }
}

KernelParams select_hyperparameters(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const KernelParams& start) {
  static constexpr std::array kLengthGrid{0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2};
  static constexpr std::array kNoiseGrid{1e-6, 1e-4, 1e-2};

  auto score = [&](const KernelParams& p) {
    try {
      return GaussianProcess::fit(X, y, p).log_marginal_likelihood();
    } catch (const SurrogateError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };

  KernelParams best = start;
  double best_score = score(best);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t d = 0; d < best.length_scales.size(); ++d) {
      for (double l : kLengthGrid) {
        KernelParams trial = best;
        trial.length_scales[d] = l;
        const double s = score(trial);
        if (s > best_score) {
          best_score = s;
          best = std::move(trial);
        }
      }
    }
    for (double noise : kNoiseGrid) {
      KernelParams trial = best;
      trial.noise_variance = noise;
      const double s = score(trial);
      if (s > best_score) {
        best_score = s;
        best = std::move(trial);
      }
    }
  }
  return best;
}

}  // namespace flexibo
