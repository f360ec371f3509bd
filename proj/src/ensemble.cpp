#include "liuboost/ensemble.hpp"
#include "liuboost/resample.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace liuboost {

namespace {

constexpr double kLogFloor = 1e-10;
constexpr double kMaxExponent = 35.0;

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void normalize(std::vector<double>& d)
{
    const double sum = std::accumulate(d.begin(), d.end(), 0.0);
    for (auto& v : d)
        v /= sum;
}

} // namespace

std::string_view to_string(Algorithm algorithm)
{
    return algorithm == Algorithm::liuboost ? "liuboost" : "rusboost";
}

std::optional<Algorithm> parse_algorithm(std::string_view text)
{
    const auto t = lower(text);
    if (t == "liuboost")
        return Algorithm::liuboost;
    if (t == "rusboost")
        return Algorithm::rusboost;
    return std::nullopt;
}

std::string_view to_string(ScoreMode mode)
{
    return mode == ScoreMode::hard_vote ? "hard_vote" : "confidence";
}

std::optional<ScoreMode> parse_score_mode(std::string_view text)
{
    const auto t = lower(text);
    if (t == "hard_vote" || t == "vote")
        return ScoreMode::hard_vote;
    if (t == "confidence")
        return ScoreMode::confidence;
    return std::nullopt;
}

double compute_alpha(double cor_sum, double mis_sum)
{
    if (!(cor_sum >= 0.0) || !(mis_sum >= 0.0) || cor_sum + mis_sum > 1.0 + 1e-9)
        throw std::domain_error("compute_alpha: need cor_sum, mis_sum >= 0 and cor_sum + mis_sum <= 1");
    const double num = std::max(1.0 + cor_sum - mis_sum, kLogFloor);
    const double den = std::max(1.0 - cor_sum + mis_sum, kLogFloor);
    return 0.5 * std::log(num / den);
}

BoostModel train_boost(const Dataset& ds, const CostVector& costs, const BoostConfig& config,
                       Algorithm tag, TrainingTrace* trace)
{
    const std::size_t m = ds.size();
    if (ds.features.rows() != m)
        throw std::invalid_argument("train: feature rows and labels differ in length");
    if (costs.size() != m)
        throw std::invalid_argument("train: cost vector length does not match the dataset");
    if (config.rounds < 1)
        throw std::invalid_argument("train: rounds must be at least 1");
    const auto positives = static_cast<std::size_t>(std::count(ds.labels.begin(), ds.labels.end(), 1));
    if (positives == 0 || positives == m)
        throw std::invalid_argument("train: training data contains a single class");
    if (config.undersample)
        undersample_target(1, config.majority_fraction); // validates the fraction

    BoostModel model;
    model.algorithm = tag;
    model.config = config;
    model.dims = ds.dims();

    Rng rng(config.seed);
    std::vector<double> dist(m, 1.0 / static_cast<double>(m));
    std::vector<int> pred(m);
    std::vector<std::size_t> all(m);
    std::iota(all.begin(), all.end(), std::size_t{0});
    bool warned_clamp = false;

    std::size_t attempts = 0;
    while (model.stages.size() < config.rounds) {
        ++attempts;
        std::vector<std::size_t> sample;
        if (config.undersample) {
            auto drawn = random_undersample(ds.labels, config.majority_fraction, rng);
            if (drawn.clamped && !warned_clamp && trace) {
                trace->warnings.push_back("requested majority count exceeds available majority "
                                          "instances; keeping all of them");
                warned_clamp = true;
            }
            sample = std::move(drawn.indices);
        } else {
            sample = all;
        }

        std::vector<double> sw(sample.size());
        for (std::size_t n = 0; n < sample.size(); ++n)
            sw[n] = dist[sample[n]];
        DecisionTree tree = fit_tree(ds.features, ds.labels, sample, sw, config.tree);

        double mis_sum = 0.0;
        double cor_sum = 0.0;
        double error = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            pred[i] = tree.predict(ds.features.row(i));
            if (pred[i] != ds.labels[i]) {
                mis_sum += dist[i] * costs.weight_plus[i];
                error += dist[i];
            } else {
                cor_sum += dist[i] * costs.weight_minus[i];
            }
        }
        // Costs <= 1 and a normalized D keep cor_sum + mis_sum <= 1.
        const double alpha = compute_alpha(cor_sum, mis_sum);

        if (!(alpha > 0.0)) {
            if (attempts > config.max_retries) {
                model.stopped_early = true;
                if (trace)
                    trace->warnings.push_back("round " + std::to_string(model.stages.size() + 1) +
                                              ": no positive alpha after " + std::to_string(attempts) +
                                              " attempts; stopping with " +
                                              std::to_string(model.stages.size()) + " stages");
                break;
            }
            continue;
        }

        for (std::size_t i = 0; i < m; ++i) {
            const double margin = static_cast<double>(ds.labels[i] * pred[i]);
            const double cost = pred[i] != ds.labels[i] ? costs.weight_plus[i] : costs.weight_minus[i];
            const double exponent = std::clamp(-alpha * margin * cost, -kMaxExponent, kMaxExponent);
            dist[i] *= std::exp(exponent);
        }
        normalize(dist);

        if (trace)
            trace->rounds.push_back({mis_sum, cor_sum, error, alpha, attempts, dist});
        model.stages.push_back({alpha, std::move(tree)});
        attempts = 0;
    }
    return model;
}

BoostModel train_liuboost(const Dataset& ds, const BoostConfig& config, TrainingTrace* trace)
{
    const auto costs = assign_weights(ds, config.knn, config.delta);
    return train_boost(ds, costs, config, Algorithm::liuboost, trace);
}

BoostModel train_rusboost(const Dataset& ds, const BoostConfig& config, TrainingTrace* trace)
{
    return train_boost(ds, unit_costs(ds.size()), config, Algorithm::rusboost, trace);
}

BoostModel train(Algorithm algorithm, const Dataset& ds, const BoostConfig& config,
                 TrainingTrace* trace)
{
    return algorithm == Algorithm::liuboost ? train_liuboost(ds, config, trace)
                                            : train_rusboost(ds, config, trace);
}

double decision_score(const BoostModel& model, std::span<const double> x, ScoreMode mode)
{
    if (model.stages.empty())
        throw std::logic_error("decision_score: model has no stages");
    if (x.size() != model.dims)
        throw std::invalid_argument("decision_score: expected " + std::to_string(model.dims) +
                                    " features, got " + std::to_string(x.size()));
    double g = 0.0;
    for (const auto& stage : model.stages) {
        const auto& leaf = stage.tree.leaf(x);
        const double vote = mode == ScoreMode::hard_vote ? leaf.label : leaf.label * leaf.confidence;
        g += stage.alpha * vote;
    }
    return g;
}

int classify(const BoostModel& model, std::span<const double> x)
{
    return decision_score(model, x) > 0.0 ? 1 : -1;
}

std::vector<double> decision_scores(const BoostModel& model, const Matrix& features, ScoreMode mode)
{
    std::vector<double> out(features.rows());
    for (std::size_t i = 0; i < features.rows(); ++i)
        out[i] = decision_score(model, features.row(i), mode);
    return out;
}

nlohmann::json config_to_json(const BoostConfig& c)
{
    return {
        {"rounds", c.rounds},
        {"knn", c.knn},
        {"delta", c.delta},
        {"majority_fraction", c.majority_fraction},
        {"undersample", c.undersample},
        {"tree",
         {{"max_depth", c.tree.max_depth},
          {"min_leaf_fraction", c.tree.min_leaf_fraction},
          {"min_gain", c.tree.min_gain}}},
        {"seed", c.seed},
        {"max_retries", c.max_retries},
    };
}

BoostConfig config_from_json(const nlohmann::json& j)
{
    BoostConfig c;
    c.rounds = j.at("rounds").get<std::size_t>();
    c.knn = j.at("knn").get<std::size_t>();
    c.delta = j.at("delta").get<double>();
    c.majority_fraction = j.at("majority_fraction").get<double>();
    c.undersample = j.at("undersample").get<bool>();
    const auto& t = j.at("tree");
    c.tree.max_depth = t.at("max_depth").get<std::size_t>();
    c.tree.min_leaf_fraction = t.at("min_leaf_fraction").get<double>();
    c.tree.min_gain = t.at("min_gain").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.max_retries = j.at("max_retries").get<std::size_t>();
    return c;
}

nlohmann::json model_to_json(const BoostModel& model)
{
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : model.stages) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& n : s.tree.nodes()) {
            if (n.is_leaf())
                nodes.push_back({{"label", n.label}, {"confidence", n.confidence}});
            else
                nodes.push_back({{"feature", n.feature},
                                 {"threshold", n.threshold},
                                 {"left", n.left},
                                 {"right", n.right},
                                 {"label", n.label},
                                 {"confidence", n.confidence}});
        }
        stages.push_back({{"alpha", s.alpha}, {"nodes", std::move(nodes)}});
    }
    return {
        {"schema_version", kModelSchemaVersion},
        {"algorithm", to_string(model.algorithm)},
        {"dims", model.dims},
        {"trained_iterations", model.trained_iterations()},
        {"stopped_early", model.stopped_early},
        {"config", config_to_json(model.config)},
        {"stages", std::move(stages)},
    };
}

BoostModel model_from_json(const nlohmann::json& doc)
{
    try {
        if (doc.at("schema_version").get<int>() != kModelSchemaVersion)
            throw std::runtime_error("unsupported model schema version");
        BoostModel model;
        auto algo = parse_algorithm(doc.at("algorithm").get<std::string>());
        if (!algo)
            throw std::runtime_error("unknown algorithm in model document");
        model.algorithm = *algo;
        model.dims = doc.at("dims").get<std::size_t>();
        model.stopped_early = doc.at("stopped_early").get<bool>();
        model.config = config_from_json(doc.at("config"));
        for (const auto& s : doc.at("stages")) {
            std::vector<TreeNode> nodes;
            for (const auto& n : s.at("nodes")) {
                TreeNode node;
                node.label = n.at("label").get<int>();
                node.confidence = n.at("confidence").get<double>();
                if (n.contains("feature")) {
                    node.feature = n.at("feature").get<int>();
                    node.threshold = n.at("threshold").get<double>();
                    node.left = n.at("left").get<int>();
                    node.right = n.at("right").get<int>();
                }
                nodes.push_back(node);
            }
            const double alpha = s.at("alpha").get<double>();
            if (!(alpha > 0.0))
                throw std::runtime_error("stored alpha must be positive");
            model.stages.push_back({alpha, DecisionTree(std::move(nodes), model.dims, model.config.tree)});
        }
        if (doc.at("trained_iterations").get<std::size_t>() != model.stages.size())
            throw std::runtime_error("trained_iterations does not match the stage count");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed model document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("malformed model document: ") + e.what());
    }
}

} // namespace liuboost
