#include "liuboost/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace liuboost {

namespace {

double entropy(double pos, double neg)
{
    const double total = pos + neg;
    if (total <= 0.0)
        return 0.0;
    double h = 0.0;
    for (double w : {pos, neg}) {
        if (w > 0.0) {
            const double p = w / total;
            h -= p * std::log(p);
        }
    }
    return h;
}

struct Entry {
    std::size_t row;
    int label;
    double weight;
};

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double ratio = 0.0;
};

class Builder {
public:
    Builder(const Matrix& x, std::vector<Entry> entries, const TreeParams& params)
        : x_(x), entries_(std::move(entries)), params_(params)
    {
        const double total = std::accumulate(entries_.begin(), entries_.end(), 0.0,
                                             [](double s, const Entry& e) { return s + e.weight; });
        min_leaf_ = params_.min_leaf_fraction * total;
    }

    std::vector<TreeNode> build()
    {
        std::vector<std::size_t> all(entries_.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        grow(all, 0);
        return std::move(nodes_);
    }

private:
    int grow(std::vector<std::size_t>& items, std::size_t depth)
    {
        double pos = 0.0;
        double neg = 0.0;
        for (auto i : items)
            (entries_[i].label == 1 ? pos : neg) += entries_[i].weight;
        const double total = pos + neg;

        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        {
            TreeNode& leaf = nodes_.back();
            leaf.label = pos > neg ? 1 : -1;
            leaf.confidence = total > 0.0 ? std::max(pos, neg) / total : 1.0;
        }

        if (depth >= params_.max_depth || pos == 0.0 || neg == 0.0 || total < 2.0 * min_leaf_)
            return id;

        const Split best = find_split(items, pos, neg);
        if (best.feature < 0)
            return id;

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto i : items) {
            const double v = x_(entries_[i].row, static_cast<std::size_t>(best.feature));
            (v <= best.threshold ? left : right).push_back(i);
        }
        items.clear();
        items.shrink_to_fit();

        const int l = grow(left, depth + 1);
        const int r = grow(right, depth + 1);
        TreeNode& node = nodes_[static_cast<std::size_t>(id)];
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = l;
        node.right = r;
        return id;
    }

    Split find_split(const std::vector<std::size_t>& items, double pos, double neg) const
    {
        const double total = pos + neg;
        const double parent_h = entropy(pos, neg);
        Split best;
        std::vector<std::pair<double, std::size_t>> sorted(items.size());

        for (std::size_t f = 0; f < x_.cols(); ++f) {
            for (std::size_t n = 0; n < items.size(); ++n)
                sorted[n] = {x_(entries_[items[n]].row, f), items[n]};
            std::sort(sorted.begin(), sorted.end());

            double lpos = 0.0;
            double lneg = 0.0;
            for (std::size_t n = 0; n + 1 < sorted.size(); ++n) {
                const auto& e = entries_[sorted[n].second];
                (e.label == 1 ? lpos : lneg) += e.weight;
                const double v = sorted[n].first;
                const double next = sorted[n + 1].first;
                if (!(v < next))
                    continue;
                const double wl = lpos + lneg;
                const double wr = total - wl;
                if (wl < min_leaf_ || wr < min_leaf_ || wl <= 0.0 || wr <= 0.0)
                    continue;
                const double rpos = pos - lpos;
                const double rneg = neg - lneg;
                const double gain =
                    parent_h - (wl * entropy(lpos, lneg) + wr * entropy(rpos, rneg)) / total;
                if (gain < params_.min_gain)
                    continue;
                const double split_info = entropy(wl, wr);
                if (split_info <= 0.0)
                    continue;
                const double ratio = gain / split_info;
                if (ratio > best.ratio) {
                    double mid = v + (next - v) / 2.0;
                    if (!(mid < next))
                        mid = v;
                    best = {static_cast<int>(f), mid, ratio};
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    std::vector<Entry> entries_;
    TreeParams params_;
    double min_leaf_ = 0.0;
    std::vector<TreeNode> nodes_;
};

void check_dims(const DecisionTree& tree, std::span<const double> x)
{
    if (x.size() != tree.dims())
        throw std::invalid_argument("decision tree: expected " + std::to_string(tree.dims()) +
                                    " features, got " + std::to_string(x.size()));
}

} // namespace

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t dims, TreeParams params)
    : nodes_(std::move(nodes)), dims_(dims), params_(params)
{
    if (nodes_.empty())
        throw std::invalid_argument("decision tree needs at least one node");
    const auto n = static_cast<int>(nodes_.size());
    for (const auto& node : nodes_) {
        if (node.is_leaf()) {
            if (node.label != 1 && node.label != -1)
                throw std::invalid_argument("decision tree: leaf label must be +1 or -1");
            continue;
        }
        if (static_cast<std::size_t>(node.feature) >= dims_ || node.left < 0 || node.left >= n ||
            node.right < 0 || node.right >= n)
            throw std::invalid_argument("decision tree: malformed internal node");
    }
}

std::size_t DecisionTree::depth() const
{
    std::size_t best = 0;
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& node = nodes_[static_cast<std::size_t>(id)];
        if (node.is_leaf()) {
            best = std::max(best, d);
        } else {
            stack.emplace_back(node.left, d + 1);
            stack.emplace_back(node.right, d + 1);
        }
    }
    return best;
}

const TreeNode& DecisionTree::leaf(std::span<const double> x) const
{
    check_dims(*this, x);
    const TreeNode* node = &nodes_.front();
    while (!node->is_leaf()) {
        const auto next = x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                                         : node->right;
        node = &nodes_[static_cast<std::size_t>(next)];
    }
    return *node;
}

void DecisionTree::dump(std::ostream& out) const
{
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [id, d] = stack.back();
        stack.pop_back();
        const auto& node = nodes_[static_cast<std::size_t>(id)];
        out << std::string(2 * d, ' ') << '[' << id << "] ";
        if (node.is_leaf()) {
            out << "leaf " << (node.label > 0 ? "+1" : "-1") << " conf=" << node.confidence << '\n';
        } else {
            out << 'x' << node.feature << " <= " << node.threshold << '\n';
            stack.emplace_back(node.right, d + 1);
            stack.emplace_back(node.left, d + 1);
        }
    }
}

DecisionTree fit_tree(const Matrix& features, std::span<const int> labels,
                      std::span<const std::size_t> rows, std::span<const double> weights,
                      const TreeParams& params)
{
    if (labels.size() != features.rows())
        throw std::invalid_argument("fit_tree: labels and features differ in length");
    if (rows.size() != weights.size())
        throw std::invalid_argument("fit_tree: rows and weights differ in length");
    if (rows.empty())
        throw std::invalid_argument("fit_tree: no instances");

    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("fit_tree: weights must be finite and nonnegative");
        sum += w;
    }
    if (!(sum > 0.0))
        throw std::invalid_argument("fit_tree: weights sum to zero");

    std::vector<Entry> entries;
    entries.reserve(rows.size());
    for (std::size_t n = 0; n < rows.size(); ++n) {
        if (rows[n] >= features.rows())
            throw std::out_of_range("fit_tree: row index out of range");
        const int y = labels[rows[n]];
        if (y != 1 && y != -1)
            throw std::invalid_argument("fit_tree: labels must be +1 or -1");
        // Zero-weight rows carry no information for the split statistics.
        if (weights[n] > 0.0)
            entries.push_back({rows[n], y, weights[n] / sum});
    }

    Builder builder(features, std::move(entries), params);
    return DecisionTree(builder.build(), features.cols(), params);
}

DecisionTree fit_tree(const Matrix& features, std::span<const int> labels,
                      std::span<const double> weights, const TreeParams& params)
{
    if (weights.size() != features.rows())
        throw std::invalid_argument("fit_tree: weights and features differ in length");
    std::vector<std::size_t> rows(features.rows());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return fit_tree(features, labels, rows, weights, params);
}

int predict_tree(const DecisionTree& tree, std::span<const double> x)
{
    return tree.predict(x);
}

} // namespace liuboost
