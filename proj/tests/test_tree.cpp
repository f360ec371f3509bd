#include "helpers.hpp"
#include "liuboost/tree.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

using namespace liuboost;

namespace {

double h(double p, double n)
{
    const double t = p + n;
    double out = 0.0;
    if (p > 0)
        out -= p / t * std::log(p / t);
    if (n > 0)
        out -= n / t * std::log(n / t);
    return out;
}

/// Straightforward recursive builder: every candidate re-sums its children.
struct NaiveNode {
    int feature = -1;
    double threshold = 0.0;
    int label = -1;
    std::unique_ptr<NaiveNode> left;
    std::unique_ptr<NaiveNode> right;
};

struct NaiveTree {
    const Matrix& x;
    const std::vector<int>& y;
    std::vector<double> w;
    TreeParams params;
    double min_leaf = 0.0;

    std::unique_ptr<NaiveNode> grow(const std::vector<std::size_t>& rows, std::size_t depth)
    {
        auto node = std::make_unique<NaiveNode>();
        double p = 0;
        double n = 0;
        for (auto r : rows)
            (y[r] == 1 ? p : n) += w[r];
        node->label = p > n ? 1 : -1;
        if (depth >= params.max_depth || p == 0 || n == 0 || p + n < 2 * min_leaf)
            return node;

        double best = 0.0;
        for (std::size_t f = 0; f < x.cols(); ++f) {
            std::set<double> values;
            for (auto r : rows)
                values.insert(x(r, f));
            for (auto it = values.begin(); std::next(it) != values.end(); ++it) {
                const double t = *it + (*std::next(it) - *it) / 2.0;
                double lp = 0, ln = 0, rp = 0, rn = 0;
                for (auto r : rows) {
                    const bool left = x(r, f) <= t;
                    if (y[r] == 1)
                        (left ? lp : rp) += w[r];
                    else
                        (left ? ln : rn) += w[r];
                }
                const double wl = lp + ln;
                const double wr = rp + rn;
                if (wl < min_leaf || wr < min_leaf)
                    continue;
                const double gain = h(p, n) - (wl * h(lp, ln) + wr * h(rp, rn)) / (p + n);
                if (gain < params.min_gain)
                    continue;
                const double ratio = gain / h(wl, wr);
                if (ratio > best * (1 + 1e-12)) {
                    best = ratio;
                    node->feature = static_cast<int>(f);
                    node->threshold = t;
                }
            }
        }
        if (node->feature < 0)
            return node;
        std::vector<std::size_t> l;
        std::vector<std::size_t> r;
        for (auto row : rows)
            (x(row, static_cast<std::size_t>(node->feature)) <= node->threshold ? l : r).push_back(row);
        node->left = grow(l, depth + 1);
        node->right = grow(r, depth + 1);
        return node;
    }
};

int naive_predict(const NaiveNode& node, std::span<const double> x)
{
    if (node.feature < 0)
        return node.label;
    return naive_predict(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? *node.left : *node.right, x);
}

/// Recursive evaluator over the flat node array.
int evaluate(const std::vector<TreeNode>& nodes, int id, std::span<const double> x)
{
    const auto& n = nodes[static_cast<std::size_t>(id)];
    if (n.is_leaf())
        return n.label;
    return evaluate(nodes, x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right, x);
}

} // namespace

TEST_CASE("XOR-like stump: equal gain ratios resolve to the lower feature index")
{
    // BL(0,0) x3 negative, TR(1,1) x1 negative, BR(1,0) x2 positive, TL(0,1) x2 positive.
    const auto x = Matrix::from_rows({{0, 0}, {0, 0}, {0, 0}, {1, 1}, {1, 0}, {1, 0}, {0, 1}, {0, 1}});
    const std::vector<int> y{-1, -1, -1, -1, 1, 1, 1, 1};
    const std::vector<double> w(8, 1.0);
    const auto tree = fit_tree(x, y, w, {1, 0.0, 1e-7});
    const auto& root = tree.nodes().front();
    CHECK(root.feature == 0);
    CHECK(root.threshold == 0.5);

    // Both candidate stumps score the same gain ratio.
    const double gain = h(4, 4) - (5 * h(2, 3) + 3 * h(2, 1)) / 8;
    CHECK(gain > 0);
    const auto left = tree.nodes()[static_cast<std::size_t>(root.left)];
    const auto right = tree.nodes()[static_cast<std::size_t>(root.right)];
    CHECK(left.label == -1);
    CHECK(left.confidence == doctest::Approx(0.6));
    CHECK(right.label == 1);
    CHECK(right.confidence == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("weights steer the split choice")
{
    const auto x = Matrix::from_rows({{0, 0}, {1, 1}, {2, 0}, {3, 1}});
    const std::vector<int> y{-1, -1, 1, 1};
    const auto t = fit_tree(x, y, std::vector<double>{1, 1, 1, 1}, {1, 0.0, 1e-7});
    CHECK(t.nodes().front().feature == 0);
    CHECK(t.nodes().front().threshold == 1.5);
    // Zero weights drop the middle rows; both features then separate perfectly and the
    // lower index wins.
    const auto t2 = fit_tree(x, y, std::vector<double>{1, 0, 0, 1}, {1, 0.0, 1e-7});
    CHECK(t2.nodes().front().feature == 0);
    CHECK(t2.predict(std::vector<double>{0.5, 0}) == -1);
    CHECK(t2.predict(std::vector<double>{2.5, 0}) == 1);
}

TEST_CASE("fitted trees agree with a naive recursive builder")
{
    Rng rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        const auto ds = testutil::random_dataset(rng, 20 + uniform_below(rng, 80), 1 + uniform_below(rng, 4), 0.4);
        std::vector<double> w(ds.size());
        double sum = 0;
        for (auto& v : w) {
            v = 0.1 + uniform_unit(rng);
            sum += v;
        }
        const TreeParams params{1 + uniform_below(rng, 5), rep % 2 ? 0.01 : 0.05, 1e-7};
        const auto tree = fit_tree(ds.features, ds.labels, w, params);

        std::vector<double> wn(w);
        for (auto& v : wn)
            v /= sum;
        NaiveTree naive{ds.features, ds.labels, wn, params, params.min_leaf_fraction};
        std::vector<std::size_t> all(ds.size());
        for (std::size_t i = 0; i < all.size(); ++i)
            all[i] = i;
        const auto root = naive.grow(all, 0);

        CHECK(tree.depth() <= params.max_depth);
        Rng probe(rep);
        for (int q = 0; q < 200; ++q) {
            std::vector<double> xq(ds.dims());
            for (auto& v : xq)
                v = uniform_unit(probe) * 1.2 - 0.1;
            CHECK(tree.predict(xq) == naive_predict(*root, xq));
            CHECK(tree.predict(xq) == evaluate(tree.nodes(), 0, xq));
        }
        for (std::size_t i = 0; i < ds.size(); ++i)
            CHECK(tree.predict(ds.features.row(i)) == naive_predict(*root, ds.features.row(i)));
    }
}

TEST_CASE("fitting on a row subset equals fitting on the extracted rows")
{
    Rng rng(8);
    const auto ds = testutil::random_dataset(rng, 60, 3, 0.4);
    std::vector<std::size_t> rows;
    std::vector<double> w;
    for (std::size_t i = 0; i < ds.size(); i += 2) {
        rows.push_back(i);
        w.push_back(1.0 + static_cast<double>(i % 5));
    }
    const auto sub = ds.subset(rows);
    const auto a = fit_tree(ds.features, ds.labels, rows, w);
    const auto b = fit_tree(sub.features, sub.labels, w);
    CHECK(a.nodes() == b.nodes());
}

TEST_CASE("pure and depth-zero trees are single leaves")
{
    const auto x = Matrix::from_rows({{0}, {1}, {2}});
    const auto pure = fit_tree(x, std::vector<int>{1, 1, 1}, std::vector<double>{1, 1, 1});
    CHECK(pure.nodes().size() == 1);
    CHECK(pure.nodes().front().label == 1);
    const auto stump = fit_tree(x, std::vector<int>{1, -1, -1}, std::vector<double>{1, 1, 1}, {0, 0.01, 1e-7});
    CHECK(stump.nodes().size() == 1);
    CHECK(stump.nodes().front().label == -1);
    // Equal class weight at a leaf resolves to -1.
    const auto tie = fit_tree(x, std::vector<int>{1, -1, -1}, std::vector<double>{2, 1, 1}, {0, 0.01, 1e-7});
    CHECK(tie.nodes().front().label == -1);
}

TEST_CASE("min leaf fraction blocks small children")
{
    const auto x = Matrix::from_rows({{0}, {1}, {2}, {3}});
    const std::vector<int> y{1, -1, -1, -1};
    const auto loose = fit_tree(x, y, std::vector<double>{1, 1, 1, 1}, {8, 0.2, 1e-7});
    CHECK(loose.nodes().front().threshold == 0.5);
    CHECK(loose.nodes().size() == 3);
    const auto strict = fit_tree(x, y, std::vector<double>{1, 1, 1, 1}, {8, 0.3, 1e-7});
    CHECK(strict.nodes().front().threshold == 1.5);
    CHECK(strict.nodes().size() == 3);
    CHECK(fit_tree(x, y, std::vector<double>{1, 1, 1, 1}, {8, 0.49, 1e-7}).nodes().size() == 3);
}

TEST_CASE("tree input validation")
{
    const auto x = Matrix::from_rows({{0}, {1}});
    const std::vector<int> y{1, -1};
    CHECK_THROWS(fit_tree(x, y, std::vector<double>{0, 0}));
    CHECK_THROWS(fit_tree(x, y, std::vector<double>{-1, 1}));
    CHECK_THROWS(fit_tree(x, y, std::vector<double>{1}));
    CHECK_THROWS(fit_tree(x, std::vector<int>{1, 0}, std::vector<double>{1, 1}));
    const auto t = fit_tree(x, y, std::vector<double>{1, 1}, {8, 0.0, 1e-7});
    CHECK_THROWS(t.predict(std::vector<double>{1, 2}));
    CHECK_THROWS(DecisionTree({TreeNode{0, 0.5, 1, 7, -1, 1.0}, TreeNode{}}, 1, {}));
    std::ostringstream dump;
    t.dump(dump);
    CHECK(dump.str().find("x0 <= 0.5") != std::string::npos);
}
