#pragma once

#include "liuboost/dataset.hpp"
#include "liuboost/random.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace testutil {

/// Random two-class dataset; labels drawn with P(+1) = pos_rate, at least
/// one of each class guaranteed.
inline liuboost::Dataset random_dataset(liuboost::Rng& rng, std::size_t m, std::size_t d,
                                        double pos_rate = 0.3, int grid = 0)
{
    liuboost::Dataset ds;
    ds.name = "synthetic";
    ds.features = liuboost::Matrix(m, d);
    ds.labels.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const double u = liuboost::uniform_unit(rng);
            // A coarse grid produces many distance ties.
            ds.features(i, j) = grid > 0 ? static_cast<double>(static_cast<int>(u * grid)) : u;
        }
        ds.labels[i] = liuboost::uniform_unit(rng) < pos_rate ? 1 : -1;
    }
    ds.labels[0] = 1;
    ds.labels[m - 1] = -1;
    for (int y : ds.labels)
        (y == 1 ? ds.minority_count : ds.majority_count) += 1;
    ds.positive_class = "pos";
    ds.negative_class = "neg";
    for (std::size_t j = 0; j < d; ++j)
        ds.feature_names.push_back("f" + std::to_string(j));
    return ds;
}

/// Two clusters separated along every axis.
inline liuboost::Dataset separable_dataset(liuboost::Rng& rng, std::size_t pos, std::size_t neg,
                                           std::size_t d = 2)
{
    liuboost::Dataset ds;
    ds.name = "separable";
    ds.features = liuboost::Matrix(pos + neg, d);
    for (std::size_t i = 0; i < pos + neg; ++i) {
        const bool p = i < pos;
        for (std::size_t j = 0; j < d; ++j)
            ds.features(i, j) = (p ? 10.0 : 0.0) + liuboost::uniform_unit(rng);
        ds.labels.push_back(p ? 1 : -1);
    }
    ds.minority_count = pos;
    ds.majority_count = neg;
    ds.positive_class = "pos";
    ds.negative_class = "neg";
    for (std::size_t j = 0; j < d; ++j)
        ds.feature_names.push_back("f" + std::to_string(j));
    return ds;
}

} // namespace testutil
