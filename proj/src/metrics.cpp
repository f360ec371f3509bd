#include "liuboost/metrics.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace liuboost {

namespace {

void check(const ScoredLabels& sl)
{
    if (sl.scores.size() != sl.labels.size())
        throw std::invalid_argument("scores and labels differ in length");
    for (std::size_t i = 0; i < sl.size(); ++i) {
        if (sl.labels[i] != 1 && sl.labels[i] != -1)
            throw std::invalid_argument("labels must be +1 or -1");
        if (std::isnan(sl.scores[i]))
            throw std::invalid_argument("scores must not be NaN");
    }
}

/// Cumulative (tp, fp) after each group of equal scores, highest score first.
std::vector<std::pair<std::size_t, std::size_t>> threshold_groups(const ScoredLabels& sl)
{
    std::vector<std::size_t> order(sl.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return sl.scores[a] > sl.scores[b]; });

    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t n = 0; n < order.size(); ++n) {
        (sl.labels[order[n]] == 1 ? tp : fp) += 1;
        if (n + 1 == order.size() || sl.scores[order[n + 1]] != sl.scores[order[n]])
            out.emplace_back(tp, fp);
    }
    return out;
}

Rate ratio(std::size_t num, std::size_t den)
{
    if (den == 0)
        return {0.0, true};
    return {static_cast<double>(num) / static_cast<double>(den), false};
}

} // namespace

std::size_t ScoredLabels::positives() const noexcept
{
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
}

ConfusionCounts confusion_counts(const ScoredLabels& sl, double threshold)
{
    check(sl);
    ConfusionCounts c;
    for (std::size_t i = 0; i < sl.size(); ++i) {
        const bool predicted = sl.scores[i] > threshold;
        if (sl.labels[i] == 1)
            (predicted ? c.tp : c.fn) += 1;
        else
            (predicted ? c.fp : c.tn) += 1;
    }
    return c;
}

Rate precision(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); }
Rate tpr(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }
Rate fpr(const ConfusionCounts& c) { return ratio(c.fp, c.fp + c.tn); }

Curve roc_curve(const ScoredLabels& sl)
{
    check(sl);
    const auto pos = sl.positives();
    const auto neg = sl.size() - pos;
    if (pos == 0 || neg == 0)
        throw std::invalid_argument("ROC curve needs both classes");

    Curve c;
    c.points.push_back({0.0, 0.0});
    for (auto [tp, fp] : threshold_groups(sl)) {
        const CurvePoint p{static_cast<double>(fp) / static_cast<double>(neg),
                           static_cast<double>(tp) / static_cast<double>(pos)};
        const auto& prev = c.points.back();
        c.area += (p.x - prev.x) * (p.y + prev.y) / 2.0;
        c.points.push_back(p);
    }
    return c;
}

Curve pr_curve(const ScoredLabels& sl)
{
    check(sl);
    const auto pos = sl.positives();
    if (pos == 0)
        throw std::invalid_argument("PR curve needs at least one positive");

    Curve c;
    double prev_recall = 0.0;
    for (auto [tp, fp] : threshold_groups(sl)) {
        const double recall = static_cast<double>(tp) / static_cast<double>(pos);
        const double prec = static_cast<double>(tp) / static_cast<double>(tp + fp);
        if (c.points.empty())
            c.points.push_back({0.0, prec});
        c.area += (recall - prev_recall) * prec;
        c.points.push_back({recall, prec});
        prev_recall = recall;
    }
    return c;
}

double auroc(const ScoredLabels& sl) { return roc_curve(sl).area; }
double aupr(const ScoredLabels& sl) { return pr_curve(sl).area; }

void write_curve_csv(std::ostream& out, const Curve& curve, std::string_view x_name,
                     std::string_view y_name)
{
    out << x_name << ',' << y_name << '\n';
    for (const auto& p : curve.points)
        out << detail::format_double(p.x) << ',' << detail::format_double(p.y) << '\n';
}

} // namespace liuboost
