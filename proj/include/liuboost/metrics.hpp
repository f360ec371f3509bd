#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace liuboost {

struct ScoredLabels {
    std::vector<double> scores;
    std::vector<int> labels; ///< +1 / -1

    std::size_t size() const noexcept { return scores.size(); }
    std::size_t positives() const noexcept;
    std::size_t negatives() const noexcept { return labels.size() - positives(); }
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// A rate plus a flag raised when its denominator was zero (value is 0 then).
struct Rate {
    double value = 0.0;
    bool degenerate = false;
};

/// Predicted positive iff score > threshold.
ConfusionCounts confusion_counts(const ScoredLabels& sl, double threshold);

Rate precision(const ConfusionCounts& c);
Rate tpr(const ConfusionCounts& c);
Rate fpr(const ConfusionCounts& c);

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
};

struct Curve {
    std::vector<CurvePoint> points;
    double area = 0.0;
};

/// (FPR, TPR) after each distinct threshold, from (0,0) to (1,1); area by
/// the trapezoid rule. Equal scores form one threshold group.
/// Throws std::invalid_argument unless both classes are present.
Curve roc_curve(const ScoredLabels& sl);

/// (recall, precision) after each distinct threshold, preceded by
/// (0, first precision). Area is the step sum of recall increments times
/// precision (no interpolation). Throws without positives.
Curve pr_curve(const ScoredLabels& sl);

double auroc(const ScoredLabels& sl);
double aupr(const ScoredLabels& sl);

/// Header row `x_name,y_name`, then one point per line.
void write_curve_csv(std::ostream& out, const Curve& curve, std::string_view x_name,
                     std::string_view y_name);

} // namespace liuboost
