#pragma once

#include "liuboost/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace liuboost {

/// Binary classification data. Labels are +1 (minority, "positive") and -1.
struct Dataset {
    std::string name;
    Matrix features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::string positive_class; ///< original class value mapped to +1
    std::string negative_class; ///< original class value mapped to -1
    std::size_t minority_count = 0; ///< number of +1 labels
    std::size_t majority_count = 0; ///< number of -1 labels

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dims() const noexcept { return features.cols(); }

    /// Rows in the given order. Label identity is kept as-is, so the +1 class
    /// of a subset is always the parent's minority class.
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Throws std::invalid_argument if the structural invariants do not hold.
    void validate() const;
};

/// Error raised while reading KEEL text; carries the 1-based line number
/// (0 when the problem is not tied to a single line).
class KeelParseError : public std::runtime_error {
public:
    KeelParseError(std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Parses a two-class KEEL .dat document.
///
/// Numeric attributes are read as reals. Nominal input attributes are encoded
/// as the 0-based position of the value in the declared list. The class
/// column (the @outputs attribute, else the last one) is mapped so the
/// less frequent value becomes +1; on equal counts `positive_class_hint`
/// decides, else the lexicographically smaller value. Missing values ("?",
/// "<null>") are rejected.
Dataset parse_keel(std::string_view text,
                   const std::optional<std::string>& positive_class_hint = std::nullopt);

/// Reads and parses a file; the dataset is named after the file stem.
Dataset load_keel_file(const std::filesystem::path& path,
                       const std::optional<std::string>& positive_class_hint = std::nullopt);

/// Serializes to KEEL text that parse_keel reads back to identical
/// features and labels (given the positive class as hint on count ties).
std::string write_keel(const Dataset& ds);

/// majority_count / minority_count.
double imbalance_ratio(const Dataset& ds);

struct FoldPlan {
    std::vector<std::vector<std::size_t>> folds; ///< sorted test indices per fold
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return folds.size(); }
    /// Complement of fold `f`, ascending.
    std::vector<std::size_t> train_indices(std::size_t f) const;
};

/// Seeded stratified k-fold partition. Each class is shuffled and dealt
/// round-robin, the majority continuing where the minority stopped, so fold
/// sizes and per-class fold counts differ by at most one. A class with fewer
/// than k members is spread one instance per fold and a warning is recorded.
FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);
FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

/// Per-column min-max scaling parameters.
struct MinMaxScaler {
    std::vector<double> minimum;
    std::vector<double> range; ///< max - min; zero for constant columns

    static MinMaxScaler fit(const Matrix& features);
    /// Maps fitted columns to [0,1]; constant columns map to 0. Values
    /// outside the fitted range (test rows) fall outside [0,1].
    Matrix transform(const Matrix& features) const;
};

/// Fits the scaler on `ds` itself and applies it.
Dataset min_max_normalize(const Dataset& ds);

} // namespace liuboost
