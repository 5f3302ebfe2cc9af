#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tcprio/domain.hpp"
#include "tcprio/replay_buffer.hpp"

namespace tcprio {

enum class SplitCriterion { kGini, kEntropy };

SplitCriterion parse_split_criterion(std::string_view name);
std::string criterion_name(SplitCriterion c);

struct TreeParams {
  SplitCriterion criterion = SplitCriterion::kGini;
  std::optional<std::size_t> max_depth = 20;  // nullopt: grow until pure
  std::size_t min_samples_split = 3;
};

/// Internal nodes send `x[feature] <= threshold` left. Leaves store the
/// fraction of positive labels that reached them.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::size_t samples = 0;
  std::size_t depth = 0;

  bool is_leaf() const noexcept { return feature < 0; }
};

class TreeModel {
 public:
  /// Single leaf returning `value`; used before the first fit.
  static TreeModel constant(std::size_t input_dim, double value, TreeParams params = {});

  /// Validates structure: children exist, every internal node has two, and
  /// feature indices are in range. Node 0 is the root.
  static TreeModel from_nodes(std::size_t input_dim, TreeParams params,
                              std::vector<TreeNode> nodes);

  double predict(std::span<const double> input) const;
  double predict(const FeatureVector& state) const;

  std::size_t input_dimension() const noexcept { return input_dim_; }
  const TreeParams& params() const noexcept { return params_; }
  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t depth() const noexcept;
  std::size_t leaf_count() const noexcept;

 private:
  friend TreeModel fit_tree(std::span<const std::vector<double>>, std::span<const int>,
                            const TreeParams&);
  TreeModel() = default;

  std::size_t input_dim_ = 0;
  TreeParams params_;
  std::vector<TreeNode> nodes_;
};

/// 1 - sum_c p_c^2 over binary labels. Throws on an empty list.
double gini_impurity(std::span<const int> labels);
/// Shannon entropy in bits over binary labels. Throws on an empty list.
double entropy_impurity(std::span<const int> labels);
double impurity(SplitCriterion c, std::size_t positives, std::size_t total);

/// The best split of a sample set under `criterion`, as chosen at every node.
/// Candidate thresholds are midpoints between consecutive distinct values;
/// ties keep the lowest feature, then the lowest threshold.
struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity_decrease = 0.0;
};
std::optional<SplitChoice> best_split(std::span<const std::vector<double>> rows,
                                      std::span<const int> labels,
                                      std::span<const std::size_t> subset,
                                      SplitCriterion criterion);

/// Greedy top-down induction on explicit rows and binary labels.
TreeModel fit_tree(std::span<const std::vector<double>> rows, std::span<const int> labels,
                   const TreeParams& params);

/// Fits on experiences, labelling a sample positive iff its reward > 0.
TreeModel fit_tree(std::span<const Experience> batch, const TreeParams& params);

}  // namespace tcprio
