#include "helpers.hpp"
#include "liuboost/dataset.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace liuboost;

namespace {

const char* kSmall = R"(@relation tiny
@attribute a real [0.0, 10.0]
@attribute b integer[1,13]
@attribute Class {pos, neg}
@inputs a, b
@output Class
@data
1.5, 2, neg
18., 3, pos
.500, 4, neg
3, 5, neg
)";

} // namespace

TEST_CASE("KEEL parsing maps the rarer class to +1")
{
    const auto ds = parse_keel(kSmall);
    CHECK(ds.size() == 4);
    CHECK(ds.dims() == 2);
    CHECK(ds.positive_class == "pos");
    CHECK(ds.negative_class == "neg");
    CHECK(ds.labels == std::vector<int>{-1, 1, -1, -1});
    CHECK(ds.features(1, 0) == 18.0);
    CHECK(ds.features(2, 0) == 0.5);
    CHECK(ds.minority_count == 1);
    CHECK(ds.majority_count == 3);
    CHECK(imbalance_ratio(ds) == doctest::Approx(3.0));
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});
}

TEST_CASE("KEEL parsing uses the last attribute when no outputs are declared")
{
    const auto ds = parse_keel("@relation r\n@attribute x real\n@attribute y {a,b}\n@data\n1,a\n2,b\n3,b\n");
    CHECK(ds.labels == std::vector<int>{1, -1, -1});
}

TEST_CASE("KEEL parsing encodes nominal inputs by declared position")
{
    const auto ds = parse_keel(
        "@relation r\n@attribute Sex {M, F, I}\n@attribute x real\n@attribute c {p,n}\n@data\n"
        "F,1,p\nI,2,n\nM,3,n\n");
    CHECK(ds.features(0, 0) == 1.0);
    CHECK(ds.features(1, 0) == 2.0);
    CHECK(ds.features(2, 0) == 0.0);
}

TEST_CASE("equal class counts are resolved by the hint, else lexicographically")
{
    const std::string text = "@relation r\n@attribute x real\n@attribute c {zeta,alpha}\n@data\n1,zeta\n2,alpha\n";
    CHECK(parse_keel(text).positive_class == "alpha");
    CHECK(parse_keel(text, std::string("zeta")).positive_class == "zeta");
}

TEST_CASE("KEEL parser rejects malformed input")
{
    const std::string head = "@relation r\n@attribute x real\n@attribute c {p,n}\n@data\n";
    CHECK_THROWS_AS(parse_keel(head + "?,p\n2,n\n"), KeelParseError);
    CHECK_THROWS_AS(parse_keel(head + "<null>,p\n2,n\n"), KeelParseError);
    CHECK_THROWS_AS(parse_keel(head + "1,p,3\n2,n\n"), KeelParseError);
    CHECK_THROWS_AS(parse_keel(head + "abc,p\n2,n\n"), KeelParseError);
    CHECK_THROWS_AS(parse_keel(head + "1,p\n2,p\n"), KeelParseError);
    CHECK_THROWS_AS(parse_keel(head), KeelParseError);
    CHECK_THROWS_AS(parse_keel("@relation r\n@bogus x\n@attribute c {p,n}\n@data\n"), KeelParseError);
    try {
        parse_keel(head + "1,p\nx,n\n");
        FAIL("expected a parse error");
    } catch (const KeelParseError& e) {
        CHECK(e.line() == 6);
    }
}

TEST_CASE("write_keel round-trips features and labels")
{
    Rng rng(7);
    for (int rep = 0; rep < 20; ++rep) {
        auto ds = testutil::random_dataset(rng, 30, 4);
        ds.features(3, 1) = -1.0 / 3.0;
        ds.features(4, 2) = 1e-300;
        const auto back = parse_keel(write_keel(ds), ds.positive_class);
        CHECK(back.features == ds.features);
        CHECK(back.labels == ds.labels);
        CHECK(back.feature_names == ds.feature_names);
    }
}

TEST_CASE("subset keeps label identity and recounts classes")
{
    const auto ds = parse_keel(kSmall);
    const std::vector<std::size_t> idx{0, 2};
    const auto sub = ds.subset(idx);
    CHECK(sub.labels == std::vector<int>{-1, -1});
    CHECK(sub.minority_count == 0);
    CHECK(sub.majority_count == 2);
    CHECK(sub.positive_class == "pos");
}

TEST_CASE("stratified folds partition the data and balance each class")
{
    Rng rng(11);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t m = 20 + uniform_below(rng, 200);
        const std::size_t k = 2 + uniform_below(rng, 9);
        const auto ds = testutil::random_dataset(rng, m, 1, 0.2);
        const auto plan = stratified_folds(ds, k, rng());
        REQUIRE(plan.size() == k);

        std::vector<int> seen(m, 0);
        std::size_t min_size = m;
        std::size_t max_size = 0;
        std::size_t min_pos = m;
        std::size_t max_pos = 0;
        for (std::size_t f = 0; f < k; ++f) {
            const auto& fold = plan.folds[f];
            CHECK(std::is_sorted(fold.begin(), fold.end()));
            std::size_t pos = 0;
            for (auto i : fold) {
                ++seen[i];
                pos += ds.labels[i] == 1;
            }
            min_size = std::min(min_size, fold.size());
            max_size = std::max(max_size, fold.size());
            min_pos = std::min(min_pos, pos);
            max_pos = std::max(max_pos, pos);

            const auto train = plan.train_indices(f);
            CHECK(train.size() + fold.size() == m);
            std::vector<std::size_t> merged;
            std::merge(train.begin(), train.end(), fold.begin(), fold.end(), std::back_inserter(merged));
            for (std::size_t i = 0; i < m; ++i)
                CHECK(merged[i] == i);
        }
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        CHECK(max_size - min_size <= 1);
        CHECK(max_pos - min_pos <= 1);
        CHECK(plan.warnings.empty() == (ds.minority_count >= k));
    }
}

TEST_CASE("stratified folds are a pure function of the seed")
{
    Rng rng(3);
    const auto ds = testutil::random_dataset(rng, 100, 1);
    CHECK(stratified_folds(ds, 5, 42).folds == stratified_folds(ds, 5, 42).folds);
    CHECK(stratified_folds(ds, 5, 42).folds != stratified_folds(ds, 5, 43).folds);
    CHECK_THROWS(stratified_folds(ds, 1, 0));
    CHECK_THROWS(stratified_folds(ds, 101, 0));
}

TEST_CASE("min-max scaler maps training columns onto [0,1]")
{
    const auto m = Matrix::from_rows({{1, 5, 2}, {3, 5, 4}, {2, 5, 8}});
    const auto s = MinMaxScaler::fit(m);
    const auto t = s.transform(m);
    CHECK(t(0, 0) == 0.0);
    CHECK(t(1, 0) == 1.0);
    CHECK(t(2, 0) == 0.5);
    for (std::size_t r = 0; r < 3; ++r)
        CHECK(t(r, 1) == 0.0);
    CHECK(t(2, 2) == 1.0);
    const auto outside = s.transform(Matrix::from_rows({{5, 9, -4}}));
    CHECK(outside(0, 0) == doctest::Approx(2.0));
    CHECK(outside(0, 2) == doctest::Approx(-1.0));
}

TEST_CASE("bundled KEEL files all load as two-class data")
{
    std::set<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(LIUBOOST_DATA_DIR)) {
        if (e.path().extension() != ".dat")
            continue;
        const auto ds = load_keel_file(e.path());
        CHECK_NOTHROW(ds.validate());
        CHECK(ds.minority_count > 0);
        CHECK(ds.minority_count <= ds.majority_count);
        names.insert(ds.name);
    }
    CHECK(names.size() == 18);
    CHECK(names.count("pima") == 1);
}
