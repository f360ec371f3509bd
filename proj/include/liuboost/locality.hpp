#pragma once

#include "liuboost/dataset.hpp"
#include "liuboost/matrix.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace liuboost {

/// Per-instance costs derived from the class makeup of each instance's
/// k-nearest-neighbor set.
///
/// weight_plus scales the weight increase of a misclassified instance,
/// weight_minus the weight decrease of a correctly classified one. With N_s
/// same-class and N_o opposite-class neighbors: weight_plus = 1/N_s and
/// weight_minus = 1/N_o, with `delta` standing in for a zero count.
struct CostVector {
    std::vector<double> weight_plus;
    std::vector<double> weight_minus;
    std::vector<std::size_t> same_class;     ///< N_s per instance
    std::vector<std::size_t> opposite_class; ///< N_o per instance
    std::size_t k = 0;
    double delta = 1.0;

    std::size_t size() const noexcept { return weight_plus.size(); }
};

/// Indices of the k rows closest to row i in Euclidean distance, row i
/// excluded, ordered by (distance, index).
std::vector<std::size_t> knn_indices(const Matrix& features, std::size_t i, std::size_t k);

CostVector assign_weights(const Matrix& features, std::span<const int> labels, std::size_t k,
                          double delta);
CostVector assign_weights(const Dataset& ds, std::size_t k, double delta);

/// All costs 1. Turns the locality-informed update into plain AdaBoost.
CostVector unit_costs(std::size_t m);

/// CSV dump: index,label,n_same,n_opposite,weight_plus,weight_minus
void write_cost_csv(std::ostream& out, std::span<const int> labels, const CostVector& costs);

} // namespace liuboost
