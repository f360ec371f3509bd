#pragma once

#include "liuboost/matrix.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace liuboost {

struct TreeParams {
    std::size_t max_depth = 8;
    /// A split is admissible only if each child keeps at least this fraction
    /// of the total (root) sample weight.
    double min_leaf_fraction = 0.01;
    /// Splits whose information gain (nats) falls below this are not made.
    double min_gain = 1e-7;

    friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

struct TreeNode {
    int feature = -1; ///< -1 marks a leaf
    double threshold = 0.0;
    int left = -1;  ///< taken when x[feature] <= threshold
    int right = -1;
    int label = -1;           ///< leaf class, +1 or -1
    double confidence = 1.0;  ///< weighted majority fraction at the leaf

    bool is_leaf() const noexcept { return feature < 0; }
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Binary decision tree over numeric features, grown greedily by weighted
/// gain ratio. Immutable once fitted.
class DecisionTree {
public:
    DecisionTree() = default;
    DecisionTree(std::vector<TreeNode> nodes, std::size_t dims, TreeParams params);

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    std::size_t dims() const noexcept { return dims_; }
    const TreeParams& params() const noexcept { return params_; }
    std::size_t depth() const;

    /// Leaf reached by threshold routing.
    const TreeNode& leaf(std::span<const double> x) const;
    int predict(std::span<const double> x) const { return leaf(x).label; }

    /// Indented text rendering, one node per line.
    void dump(std::ostream& out) const;

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

private:
    std::vector<TreeNode> nodes_;
    std::size_t dims_ = 0;
    TreeParams params_;
};

/// Fits on all rows. `weights` must be nonnegative with a positive sum; they
/// are normalized internally.
DecisionTree fit_tree(const Matrix& features, std::span<const int> labels,
                      std::span<const double> weights, const TreeParams& params = {});

/// Fits on the listed rows only; `weights[i]` belongs to row `rows[i]`.
DecisionTree fit_tree(const Matrix& features, std::span<const int> labels,
                      std::span<const std::size_t> rows, std::span<const double> weights,
                      const TreeParams& params = {});

int predict_tree(const DecisionTree& tree, std::span<const double> x);

} // namespace liuboost
