#include <algorithm>
#include <numeric>
#include <string>

#include "flexibo/rng.hpp"
#include "flexibo/surrogate.hpp"

namespace flexibo {

namespace {

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& y;
  std::size_t min_leaf;
  RandomForest::Tree nodes;

  static double leaf_value(std::span<const std::size_t> idx, const Eigen::VectorXd& y) {
    const double first = y(static_cast<Eigen::Index>(idx.front()));
    bool constant = true;
    double sum = 0.0;
    for (auto i : idx) {
      const double v = y(static_cast<Eigen::Index>(i));
      constant = constant && v == first;
      sum += v;
    }
    return constant ? first : sum / static_cast<double>(idx.size());
  }

  std::uint32_t build(std::vector<std::size_t>& idx) {
    const auto node_id = static_cast<std::uint32_t>(nodes.size());
    nodes.push_back(RandomForest::Node{-1, 0.0, leaf_value(idx, y), 0, 0});

    const std::size_t n = idx.size();
    if (n < 2 * min_leaf) return node_id;

    double sum = 0.0, sum2 = 0.0;
    for (auto i : idx) {
      const double v = y(static_cast<Eigen::Index>(i));
      sum += v;
      sum2 += v * v;
    }
    const double parent_sse = sum2 - sum * sum / static_cast<double>(n);
    if (parent_sse <= 0.0) return node_id;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_sse = parent_sse - 1e-12 * std::max(1.0, parent_sse);
    std::vector<std::size_t> order(idx);
    for (Eigen::Index f = 0; f < X.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return X(static_cast<Eigen::Index>(a), f) < X(static_cast<Eigen::Index>(b), f);
      });
      double ls = 0.0, ls2 = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const double v = y(static_cast<Eigen::Index>(order[k]));
        ls += v;
        ls2 += v * v;
        const double here = X(static_cast<Eigen::Index>(order[k]), f);
        const double next = X(static_cast<Eigen::Index>(order[k + 1]), f);
        const std::size_t nl = k + 1, nr = n - nl;
        if (here == next || nl < min_leaf || nr < min_leaf) continue;
        const double rs = sum - ls, rs2 = sum2 - ls2;
        const double sse = (ls2 - ls * ls / static_cast<double>(nl)) + (rs2 - rs * rs / static_cast<double>(nr));
        if (sse < best_sse) {
          best_sse = sse;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (here + next);
        }
      }
    }
    if (best_feature < 0) return node_id;

    std::vector<std::size_t> left, right;
    for (auto i : idx) {
      (X(static_cast<Eigen::Index>(i), best_feature) <= best_threshold ? left : right).push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    const auto l = build(left);
    const auto r = build(right);
    auto& node = nodes[node_id];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = l;
    node.right = r;
    return node_id;
  }
};

}  // namespace

RandomForest RandomForest::fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, ForestOptions options,
                               std::uint64_t seed) {
  if (X.rows() < 1 || X.rows() != y.size())
    throw SurrogateError("RF fit needs matching, non-empty inputs and targets");
  if (options.trees < 1) throw SurrogateError("RF needs at least one tree");
  if (options.min_leaf < 1) throw SurrogateError("RF minimum leaf size must be at least 1");

  RandomForest forest;
  forest.dims_ = static_cast<std::size_t>(X.cols());
  forest.trees_.reserve(options.trees);
  const auto n = static_cast<std::size_t>(X.rows());
  for (std::size_t t = 0; t < options.trees; ++t) {
    Rng rng(mix_seed(seed, t));
    std::vector<std::size_t> sample(n);
    for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(rng, n));
    std::sort(sample.begin(), sample.end());
    TreeBuilder builder{X, y, options.min_leaf, {}};
    builder.build(sample);
    forest.trees_.push_back(std::move(builder.nodes));
  }
  return forest;
}

double RandomForest::evaluate_tree(const Tree& tree, std::span<const double> x) {
  std::uint32_t node = 0;
  while (tree[node].feature >= 0) {
    const auto& nd = tree[node];
    node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
  }
  return tree[node].value;
}

std::vector<double> RandomForest::tree_predictions(std::span<const double> x) const {
  if (x.size() != dims_)
    throw std::invalid_argument("RF query has dimension " + std::to_string(x.size()) + ", model expects " +
                                std::to_string(dims_));
  std::vector<double> out;
  out.reserve(trees_.size());
  for (const auto& tree : trees_) out.push_back(evaluate_tree(tree, x));
  return out;
}

Prediction RandomForest::predict(std::span<const double> x) const {
  const auto per_tree = tree_predictions(x);
  const double w = static_cast<double>(per_tree.size());
  if (std::all_of(per_tree.begin(), per_tree.end(), [&](double v) { return v == per_tree.front(); }))
    return Prediction{per_tree.front(), 0.0};
  double sum = 0.0;
  for (double v : per_tree) sum += v;
  const double mean = sum / w;
  double ss = 0.0;
  for (double v : per_tree) ss += (mean - v) * (mean - v);
  return Prediction{mean, std::sqrt(ss / w)};
}

void RandomForest::predict_batch(const Eigen::MatrixXd& X, std::span<Prediction> out, Execution exec) const {
  if (static_cast<std::size_t>(X.rows()) != out.size())
    throw std::invalid_argument("RF batch output size does not match input rows");
  const auto rows = static_cast<std::int64_t>(X.rows());
  auto one = [&](std::int64_t i, std::vector<double>& buf) {
    buf.resize(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index d = 0; d < X.cols(); ++d) buf[static_cast<std::size_t>(d)] = X(i, d);
    out[static_cast<std::size_t>(i)] = predict(buf);
  };
  if (exec == Execution::serial) {
    std::vector<double> buf;
    for (std::int64_t i = 0; i < rows; ++i) one(i, buf);
    return;
  }
#pragma omp parallel
  {
    std::vector<double> buf;
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) one(i, buf);
  }
}

}  // namespace flexibo
