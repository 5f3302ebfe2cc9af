#include "tcprio/tree_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcprio/errors.hpp"

namespace tcprio {
namespace {

// Decreases closer than this are treated as ties.
constexpr double kTieTolerance = 1e-12;

struct Builder {
  std::span<const std::vector<double>> rows;
  std::span<const int> labels;
  const TreeParams& params;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t> subset, std::size_t depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    std::size_t positives = 0;
    for (auto i : subset) positives += labels[i] != 0 ? 1 : 0;
    {
      auto& n = nodes.back();
      n.samples = subset.size();
      n.depth = depth;
      n.value = static_cast<double>(positives) / static_cast<double>(subset.size());
    }

    const bool pure = positives == 0 || positives == subset.size();
    const bool depth_reached = params.max_depth && depth >= *params.max_depth;
    if (pure || depth_reached || subset.size() < params.min_samples_split) return id;

    auto split = best_split(rows, labels, subset, params.criterion);
    if (!split) return id;

    std::vector<std::size_t> left, right;
    for (auto i : subset) {
      (rows[i][split->feature] <= split->threshold ? left : right).push_back(i);
    }
    subset.clear();
    subset.shrink_to_fit();

    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    auto& n = nodes[id];
    n.feature = split->feature;
    n.threshold = split->threshold;
    n.left = l;
    n.right = r;
    return id;
  }
};

}  // namespace

SplitCriterion parse_split_criterion(std::string_view name) {
  if (name == "gini") return SplitCriterion::kGini;
  if (name == "entropy") return SplitCriterion::kEntropy;
  throw ConfigError("unknown split criterion '" + std::string(name) + "'");
}

std::string criterion_name(SplitCriterion c) {
  return c == SplitCriterion::kGini ? "gini" : "entropy";
}

double impurity(SplitCriterion c, std::size_t positives, std::size_t total) {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  const double q = 1.0 - p;
  if (c == SplitCriterion::kGini) return 1.0 - (p * p + q * q);
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

double gini_impurity(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("gini impurity of an empty label set");
  const auto pos = static_cast<std::size_t>(std::count_if(
      labels.begin(), labels.end(), [](int l) { return l != 0; }));
  return impurity(SplitCriterion::kGini, pos, labels.size());
}

double entropy_impurity(std::span<const int> labels) {
  if (labels.empty()) throw InvalidArgument("entropy of an empty label set");
  const auto pos = static_cast<std::size_t>(std::count_if(
      labels.begin(), labels.end(), [](int l) { return l != 0; }));
  return impurity(SplitCriterion::kEntropy, pos, labels.size());
}

std::optional<SplitChoice> best_split(std::span<const std::vector<double>> rows,
                                      std::span<const int> labels,
                                      std::span<const std::size_t> subset,
                                      SplitCriterion criterion) {
  if (subset.size() < 2) return std::nullopt;
  const std::size_t n = subset.size();
  const std::size_t dim = rows[subset[0]].size();

  std::size_t total_pos = 0;
  for (auto i : subset) total_pos += labels[i] != 0 ? 1 : 0;
  const double parent = impurity(criterion, total_pos, n);

  std::optional<SplitChoice> best;
  std::vector<std::size_t> order(subset.begin(), subset.end());
  for (std::size_t f = 0; f < dim; ++f) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rows[a][f] < rows[b][f];
    });
    std::size_t left_pos = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      left_pos += labels[order[k]] != 0 ? 1 : 0;
      const double lo = rows[order[k]][f];
      const double hi = rows[order[k + 1]][f];
      if (!(lo < hi)) continue;

      double threshold = lo + (hi - lo) / 2.0;
      if (!(threshold < hi)) threshold = lo;

      const std::size_t nl = k + 1;
      const std::size_t nr = n - nl;
      const double child =
          (static_cast<double>(nl) * impurity(criterion, left_pos, nl) +
           static_cast<double>(nr) * impurity(criterion, total_pos - left_pos, nr)) /
          static_cast<double>(n);
      const double decrease = parent - child;
      if (!best || decrease > best->impurity_decrease + kTieTolerance) {
        best = SplitChoice{static_cast<int>(f), threshold, decrease};
      }
    }
  }
  return best;
}

TreeModel fit_tree(std::span<const std::vector<double>> rows, std::span<const int> labels,
                   const TreeParams& params) {
  if (rows.empty()) throw InvalidArgument("fit_tree needs a non-empty batch");
  if (rows.size() != labels.size()) throw InvalidArgument("rows and labels differ in length");
  if (params.min_samples_split < 2) throw ConfigError("min_samples_split must be >= 2");
  if (params.max_depth && *params.max_depth == 0) throw ConfigError("max_depth must be >= 1");
  const std::size_t dim = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != dim) throw ConfigError("rows have inconsistent dimension");
  }

  Builder b{rows, labels, params, {}};
  std::vector<std::size_t> all(rows.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  b.build(std::move(all), 0);

  TreeModel m;
  m.input_dim_ = dim;
  m.params_ = params;
  m.nodes_ = std::move(b.nodes);
  return m;
}

TreeModel fit_tree(std::span<const Experience> batch, const TreeParams& params) {
  if (batch.empty()) throw InvalidArgument("fit_tree needs a non-empty batch");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  rows.reserve(batch.size());
  labels.reserve(batch.size());
  for (const auto& e : batch) {
    rows.push_back(e.state.flatten());
    labels.push_back(e.reward > 0.0 ? 1 : 0);
  }
  return fit_tree(rows, labels, params);
}

TreeModel TreeModel::constant(std::size_t input_dim, double value, TreeParams params) {
  TreeNode leaf;
  leaf.value = value;
  return from_nodes(input_dim, params, {leaf});
}

TreeModel TreeModel::from_nodes(std::size_t input_dim, TreeParams params,
                                std::vector<TreeNode> nodes) {
  if (nodes.empty()) throw ConfigError("tree needs at least one node");
  const auto count = static_cast<int>(nodes.size());
  for (const auto& n : nodes) {
    if (n.is_leaf()) continue;
    if (static_cast<std::size_t>(n.feature) >= input_dim) {
      throw ConfigError("tree split feature out of range");
    }
    if (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count) {
      throw ConfigError("tree internal node with missing child");
    }
  }
  TreeModel m;
  m.input_dim_ = input_dim;
  m.params_ = params;
  m.nodes_ = std::move(nodes);
  return m;
}

double TreeModel::predict(std::span<const double> input) const {
  if (input.size() != input_dim_) {
    throw ConfigError("state dimension " + std::to_string(input.size()) +
                      " does not match tree input " + std::to_string(input_dim_));
  }
  std::size_t id = 0;
  // Bounded walk guards against malformed child links forming a cycle.
  for (std::size_t steps = 0; steps <= nodes_.size(); ++steps) {
    const auto& n = nodes_[id];
    if (n.is_leaf()) return n.value;
    id = static_cast<std::size_t>(input[n.feature] <= n.threshold ? n.left : n.right);
  }
  throw ConfigError("tree contains a cycle");
}

double TreeModel::predict(const FeatureVector& state) const {
  const auto flat = state.flatten();
  return predict(flat);
}

std::size_t TreeModel::depth() const noexcept {
  std::size_t d = 0;
  for (const auto& n : nodes_) d = std::max(d, n.depth);
  return d;
}

std::size_t TreeModel::leaf_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

}  // namespace tcprio
