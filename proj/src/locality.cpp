#include "liuboost/locality.hpp"
#include "format.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace liuboost {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

} // namespace

std::vector<std::size_t> knn_indices(const Matrix& features, std::size_t i, std::size_t k)
{
    const auto m = features.rows();
    if (i >= m)
        throw std::out_of_range("knn_indices: row index out of range");
    if (k >= m)
        throw std::invalid_argument("knn_indices: k must be smaller than the number of rows (k=" +
                                    std::to_string(k) + ", m=" + std::to_string(m) + ")");

    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(m - 1);
    const auto xi = features.row(i);
    for (std::size_t j = 0; j < m; ++j)
        if (j != i)
            cand.emplace_back(squared_distance(xi, features.row(j)), j);

    // Pair ordering is (distance, index): ties go to the lower index.
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
    std::vector<std::size_t> out(k);
    for (std::size_t n = 0; n < k; ++n)
        out[n] = cand[n].second;
    return out;
}

CostVector assign_weights(const Matrix& features, std::span<const int> labels, std::size_t k,
                          double delta)
{
    const auto m = features.rows();
    if (labels.size() != m)
        throw std::invalid_argument("assign_weights: labels and features differ in length");
    if (k < 1)
        throw std::invalid_argument("assign_weights: k must be at least 1");
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("assign_weights: delta must lie in (0, 1]");

    CostVector cv;
    cv.k = k;
    cv.delta = delta;
    cv.weight_plus.resize(m);
    cv.weight_minus.resize(m);
    cv.same_class.resize(m);
    cv.opposite_class.resize(m);

    for (std::size_t i = 0; i < m; ++i) {
        std::size_t same = 0;
        for (auto j : knn_indices(features, i, k))
            same += labels[j] == labels[i];
        const std::size_t opposite = k - same;
        cv.same_class[i] = same;
        cv.opposite_class[i] = opposite;

        if (same == 0) {
            cv.weight_plus[i] = delta;
            cv.weight_minus[i] = 1.0 / static_cast<double>(opposite);
        } else if (opposite == 0) {
            cv.weight_plus[i] = 1.0 / static_cast<double>(same);
            cv.weight_minus[i] = delta;
        } else {
            cv.weight_plus[i] = 1.0 / static_cast<double>(same);
            cv.weight_minus[i] = 1.0 / static_cast<double>(opposite);
        }
    }
    return cv;
}

CostVector assign_weights(const Dataset& ds, std::size_t k, double delta)
{
    return assign_weights(ds.features, ds.labels, k, delta);
}

CostVector unit_costs(std::size_t m)
{
    CostVector cv;
    cv.weight_plus.assign(m, 1.0);
    cv.weight_minus.assign(m, 1.0);
    cv.same_class.assign(m, 0);
    cv.opposite_class.assign(m, 0);
    return cv;
}

void write_cost_csv(std::ostream& out, std::span<const int> labels, const CostVector& costs)
{
    if (labels.size() != costs.size())
        throw std::invalid_argument("write_cost_csv: labels and costs differ in length");
    out << "index,label,n_same,n_opposite,weight_plus,weight_minus\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i << ',' << labels[i] << ',' << costs.same_class[i] << ',' << costs.opposite_class[i]
            << ',' << detail::format_double(costs.weight_plus[i]) << ','
            << detail::format_double(costs.weight_minus[i]) << '\n';
    }
}

} // namespace liuboost
