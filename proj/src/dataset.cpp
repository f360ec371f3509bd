#include "liuboost/dataset.hpp"
#include "liuboost/random.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace liuboost {

namespace {

std::string_view trim(std::string_view s)
{
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string unquote(std::string_view s)
{
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front())
        s = s.substr(1, s.size() - 2);
    return std::string(s);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            break;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

bool parse_real(std::string_view field, double& value)
{
    if (!field.empty() && field.front() == '+')
        field.remove_prefix(1);
    if (field.empty())
        return false;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    return ec == std::errc() && ptr == last;
}

bool is_missing(std::string_view field)
{
    return field == "?" || lower(field) == "<null>";
}

struct Attribute {
    std::string name;
    bool nominal = false;
    std::vector<std::string> values;
};

Attribute parse_attribute(std::string_view rest, std::size_t line)
{
    rest = trim(rest);
    Attribute attr;
    std::size_t pos = 0;
    if (!rest.empty() && (rest.front() == '\'' || rest.front() == '"')) {
        const auto close = rest.find(rest.front(), 1);
        if (close == std::string_view::npos)
            throw KeelParseError(line, "unterminated quoted attribute name");
        attr.name = std::string(rest.substr(1, close - 1));
        pos = close + 1;
    } else {
        while (pos < rest.size() && !std::isspace(static_cast<unsigned char>(rest[pos])) &&
               rest[pos] != '{' && rest[pos] != '[')
            ++pos;
        attr.name = std::string(rest.substr(0, pos));
    }
    if (attr.name.empty())
        throw KeelParseError(line, "attribute without a name");

    auto type = trim(rest.substr(pos));
    if (type.empty())
        throw KeelParseError(line, "attribute '" + attr.name + "' has no type");
    if (type.front() == '{') {
        const auto close = type.find('}');
        if (close == std::string_view::npos)
            throw KeelParseError(line, "unterminated nominal value list");
        attr.nominal = true;
        for (auto v : split(type.substr(1, close - 1), ','))
            attr.values.push_back(unquote(v));
        if (attr.values.empty() || (attr.values.size() == 1 && attr.values[0].empty()))
            throw KeelParseError(line, "empty nominal value list");
        return attr;
    }
    std::size_t end = 0;
    while (end < type.size() && !std::isspace(static_cast<unsigned char>(type[end])) &&
           type[end] != '[')
        ++end;
    const auto kind = lower(type.substr(0, end));
    if (kind != "real" && kind != "integer" && kind != "numeric")
        throw KeelParseError(line, "unsupported attribute type '" + std::string(type.substr(0, end)) +
                                       "' for '" + attr.name + "'");
    return attr;
}

std::vector<std::string> parse_name_list(std::string_view rest)
{
    std::vector<std::string> names;
    for (auto n : split(rest, ',')) {
        auto name = unquote(n);
        if (!name.empty())
            names.push_back(std::move(name));
    }
    return names;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace

KeelParseError::KeelParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    Dataset out;
    out.name = name;
    out.features = features.select_rows(indices);
    out.labels.reserve(indices.size());
    for (auto i : indices)
        out.labels.push_back(labels.at(i));
    out.feature_names = feature_names;
    out.positive_class = positive_class;
    out.negative_class = negative_class;
    out.minority_count = static_cast<std::size_t>(std::count(out.labels.begin(), out.labels.end(), 1));
    out.majority_count = out.labels.size() - out.minority_count;
    return out;
}

void Dataset::validate() const
{
    if (labels.size() < 2)
        throw std::invalid_argument("dataset needs at least 2 instances");
    if (features.rows() != labels.size())
        throw std::invalid_argument("feature rows and labels differ in length");
    if (features.cols() < 1)
        throw std::invalid_argument("dataset needs at least 1 feature");
    if (!feature_names.empty() && feature_names.size() != features.cols())
        throw std::invalid_argument("feature name count does not match feature count");
    std::size_t pos = 0;
    for (int y : labels) {
        if (y != 1 && y != -1)
            throw std::invalid_argument("labels must be +1 or -1");
        pos += (y == 1);
    }
    if (pos != minority_count || labels.size() - pos != majority_count)
        throw std::invalid_argument("class counts do not match labels");
    if (minority_count == 0 || majority_count == 0)
        throw std::invalid_argument("both classes must be present");
    if (minority_count > majority_count)
        throw std::invalid_argument("+1 must be the minority class");
}

Dataset parse_keel(std::string_view text, const std::optional<std::string>& positive_class_hint)
{
    std::vector<Attribute> attributes;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string relation;
    bool in_data = false;

    std::vector<std::vector<double>> rows;
    std::vector<std::string> classes;
    std::size_t class_col = 0;
    std::vector<std::size_t> input_cols;

    const auto begin_data = [&](std::size_t line) {
        if (attributes.size() < 2)
            throw KeelParseError(line, "header declares fewer than 2 attributes");
        if (outputs.size() > 1)
            throw KeelParseError(line, "more than one output attribute");
        const auto find = [&](const std::string& n) -> std::size_t {
            for (std::size_t i = 0; i < attributes.size(); ++i)
                if (attributes[i].name == n)
                    return i;
            throw KeelParseError(line, "unknown attribute '" + n + "' in @inputs/@outputs");
        };
        class_col = outputs.empty() ? attributes.size() - 1 : find(outputs.front());
        if (inputs.empty()) {
            for (std::size_t i = 0; i < attributes.size(); ++i)
                if (i != class_col)
                    input_cols.push_back(i);
        } else {
            std::vector<bool> used(attributes.size(), false);
            for (const auto& n : inputs)
                used[find(n)] = true;
            for (std::size_t i = 0; i < attributes.size(); ++i)
                if (used[i] && i != class_col)
                    input_cols.push_back(i);
        }
        if (input_cols.empty())
            throw KeelParseError(line, "no input attributes");
    };

    std::size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '%')
            continue;

        if (!in_data) {
            if (line.front() != '@')
                throw KeelParseError(line_no, "expected a header directive before @data");
            auto space = line.find_first_of(" \t");
            const auto keyword = lower(line.substr(0, space));
            const auto rest = space == std::string_view::npos ? std::string_view{} : line.substr(space);
            if (keyword == "@relation") {
                relation = unquote(rest);
            } else if (keyword == "@attribute") {
                attributes.push_back(parse_attribute(rest, line_no));
            } else if (keyword == "@inputs" || keyword == "@input") {
                inputs = parse_name_list(rest);
            } else if (keyword == "@outputs" || keyword == "@output") {
                outputs = parse_name_list(rest);
            } else if (keyword == "@data") {
                begin_data(line_no);
                in_data = true;
            } else {
                throw KeelParseError(line_no, "unknown header directive '" + std::string(line.substr(0, space)) + "'");
            }
            continue;
        }

        const auto fields = split(line, ',');
        if (fields.size() != attributes.size())
            throw KeelParseError(line_no, "expected " + std::to_string(attributes.size()) +
                                              " fields, found " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(input_cols.size());
        for (auto c : input_cols) {
            const auto field = trim(fields[c]);
            if (is_missing(field))
                throw KeelParseError(line_no, "missing value in attribute '" + attributes[c].name + "'");
            const auto& attr = attributes[c];
            if (attr.nominal) {
                const auto v = unquote(field);
                auto it = std::find(attr.values.begin(), attr.values.end(), v);
                if (it == attr.values.end())
                    throw KeelParseError(line_no, "value '" + v + "' not declared for '" + attr.name + "'");
                row.push_back(static_cast<double>(it - attr.values.begin()));
            } else {
                double value = 0.0;
                if (!parse_real(field, value))
                    throw KeelParseError(line_no, "non-numeric value '" + std::string(field) +
                                                      "' in attribute '" + attr.name + "'");
                row.push_back(value);
            }
        }
        const auto cls = trim(fields[class_col]);
        if (is_missing(cls))
            throw KeelParseError(line_no, "missing class value");
        auto cls_value = unquote(cls);
        const auto& cattr = attributes[class_col];
        if (cattr.nominal && std::find(cattr.values.begin(), cattr.values.end(), cls_value) == cattr.values.end())
            throw KeelParseError(line_no, "class value '" + cls_value + "' not declared");
        rows.push_back(std::move(row));
        classes.push_back(std::move(cls_value));
    }

    if (!in_data)
        throw KeelParseError(0, "missing @data section");
    if (rows.empty())
        throw KeelParseError(0, "empty @data section");

    std::map<std::string, std::size_t> counts;
    for (const auto& c : classes)
        ++counts[c];
    if (counts.size() != 2)
        throw KeelParseError(0, "expected exactly 2 classes, found " + std::to_string(counts.size()));

    // std::map iterates in lexicographic order, so `first` wins plain ties.
    auto first = counts.begin();
    auto second = std::next(first);
    std::string positive;
    if (first->second < second->second)
        positive = first->first;
    else if (second->second < first->second)
        positive = second->first;
    else if (positive_class_hint && counts.count(*positive_class_hint))
        positive = *positive_class_hint;
    else
        positive = first->first;

    Dataset ds;
    ds.name = relation;
    ds.features = Matrix::from_rows(rows);
    ds.positive_class = positive;
    ds.negative_class = positive == first->first ? second->first : first->first;
    for (auto c : input_cols)
        ds.feature_names.push_back(attributes[c].name);
    ds.labels.reserve(classes.size());
    for (const auto& c : classes)
        ds.labels.push_back(c == positive ? 1 : -1);
    ds.minority_count = counts[positive];
    ds.majority_count = classes.size() - ds.minority_count;
    if (ds.size() < 2)
        throw KeelParseError(0, "dataset needs at least 2 instances");
    return ds;
}

Dataset load_keel_file(const std::filesystem::path& path,
                       const std::optional<std::string>& positive_class_hint)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    Dataset ds;
    try {
        ds = parse_keel(buf.str(), positive_class_hint);
    } catch (const KeelParseError& e) {
        throw KeelParseError(e.line(), path.filename().string() + ": " + e.what());
    }
    ds.name = path.stem().string();
    return ds;
}

std::string write_keel(const Dataset& ds)
{
    const auto sanitize = [](std::string s) {
        for (auto& c : s)
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',')
                c = '_';
        return s.empty() ? std::string("_") : s;
    };
    std::vector<std::string> names;
    for (std::size_t j = 0; j < ds.dims(); ++j)
        names.push_back(sanitize(j < ds.feature_names.size() ? ds.feature_names[j]
                                                             : "x" + std::to_string(j)));

    std::string out = "@relation " + sanitize(ds.name) + "\n";
    for (const auto& n : names)
        out += "@attribute " + n + " real\n";
    const auto pos = sanitize(ds.positive_class.empty() ? "positive" : ds.positive_class);
    const auto neg = sanitize(ds.negative_class.empty() ? "negative" : ds.negative_class);
    out += "@attribute Class {" + pos + ", " + neg + "}\n@inputs ";
    for (std::size_t j = 0; j < names.size(); ++j)
        out += (j ? ", " : "") + names[j];
    out += "\n@outputs Class\n@data\n";

    char buf[64];
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.dims(); ++j) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, ds.features(i, j));
            out.append(buf, ptr);
            out += ", ";
        }
        out += ds.labels[i] == 1 ? pos : neg;
        out += '\n';
    }
    return out;
}

double imbalance_ratio(const Dataset& ds)
{
    return static_cast<double>(ds.majority_count) / static_cast<double>(ds.minority_count);
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t f) const
{
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < folds.size(); ++g)
        if (g != f)
            out.insert(out.end(), folds[g].begin(), folds[g].end());
    std::sort(out.begin(), out.end());
    return out;
}

FoldPlan stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed)
{
    if (k < 2)
        throw std::invalid_argument("stratified_folds: k must be at least 2");
    if (k > labels.size())
        throw std::invalid_argument("stratified_folds: k exceeds the number of instances");

    std::vector<std::size_t> minority;
    std::vector<std::size_t> majority;
    for (std::size_t i = 0; i < labels.size(); ++i)
        (labels[i] == 1 ? minority : majority).push_back(i);

    FoldPlan plan;
    plan.seed = seed;
    plan.folds.resize(k);
    Rng rng(seed);
    shuffle(minority, rng);
    shuffle(majority, rng);

    std::size_t slot = 0;
    for (const auto* group : {&minority, &majority}) {
        if (!group->empty() && group->size() < k) {
            plan.warnings.push_back(std::string(group == &minority ? "minority" : "majority") +
                                    " class has " + std::to_string(group->size()) + " instances for " +
                                    std::to_string(k) + " folds; " +
                                    std::to_string(k - group->size()) + " folds get none");
        }
        for (auto idx : *group)
            plan.folds[slot++ % k].push_back(idx);
    }
    for (auto& f : plan.folds)
        std::sort(f.begin(), f.end());
    return plan;
}

FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed)
{
    return stratified_folds(ds.labels, k, seed);
}

MinMaxScaler MinMaxScaler::fit(const Matrix& features)
{
    MinMaxScaler s;
    const auto d = features.cols();
    s.minimum.assign(d, 0.0);
    s.range.assign(d, 0.0);
    if (features.rows() == 0)
        return s;
    for (std::size_t j = 0; j < d; ++j) {
        double lo = features(0, j);
        double hi = lo;
        for (std::size_t i = 1; i < features.rows(); ++i) {
            lo = std::min(lo, features(i, j));
            hi = std::max(hi, features(i, j));
        }
        s.minimum[j] = lo;
        s.range[j] = hi - lo;
    }
    return s;
}

Matrix MinMaxScaler::transform(const Matrix& features) const
{
    if (features.cols() != minimum.size())
        throw std::invalid_argument("MinMaxScaler: column count mismatch");
    Matrix out(features.rows(), features.cols());
    for (std::size_t i = 0; i < features.rows(); ++i)
        for (std::size_t j = 0; j < features.cols(); ++j)
            out(i, j) = range[j] > 0.0 ? (features(i, j) - minimum[j]) / range[j] : 0.0;
    return out;
}

Dataset min_max_normalize(const Dataset& ds)
{
    Dataset out = ds;
    out.features = MinMaxScaler::fit(ds.features).transform(ds.features);
    return out;
}

} // namespace liuboost
