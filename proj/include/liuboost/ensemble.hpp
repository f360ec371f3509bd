#pragma once

#include "liuboost/dataset.hpp"
#include "liuboost/locality.hpp"
#include "liuboost/tree.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace liuboost {

enum class Algorithm { liuboost, rusboost };

std::string_view to_string(Algorithm algorithm);
/// Accepts "liuboost" / "rusboost" (case-insensitive).
std::optional<Algorithm> parse_algorithm(std::string_view text);

/// How a model turns stage outputs into a decision score.
enum class ScoreMode {
    hard_vote,  ///< g(x) = sum alpha_t * h_t(x)
    confidence, ///< h_t(x) replaced by label * leaf confidence
};

std::string_view to_string(ScoreMode mode);
std::optional<ScoreMode> parse_score_mode(std::string_view text);

struct BoostConfig {
    std::size_t rounds = 10;
    std::size_t knn = 5;
    double delta = 1.0;
    double majority_fraction = 0.5;
    /// When false every round trains on the full training set.
    bool undersample = true;
    TreeParams tree;
    std::uint64_t seed = 0;
    /// Consecutive non-positive-alpha attempts allowed before training stops.
    std::size_t max_retries = 10;

    friend bool operator==(const BoostConfig&, const BoostConfig&) = default;
};

struct Stage {
    double alpha = 0.0;
    DecisionTree tree;

    friend bool operator==(const Stage&, const Stage&) = default;
};

struct BoostModel {
    Algorithm algorithm = Algorithm::liuboost;
    BoostConfig config;
    std::vector<Stage> stages;
    std::size_t dims = 0;
    /// Set when the retry budget ran out before `config.rounds` stages.
    bool stopped_early = false;

    std::size_t trained_iterations() const noexcept { return stages.size(); }

    friend bool operator==(const BoostModel&, const BoostModel&) = default;
};

/// Per accepted round, for audits and reference comparisons.
struct RoundRecord {
    double mis_sum = 0.0;
    double cor_sum = 0.0;
    double error = 0.0;        ///< plain weighted error, sum of D over misclassified
    double alpha = 0.0;
    std::size_t attempts = 1;  ///< 1 + number of rejected draws before this round
    std::vector<double> distribution; ///< D after the update and normalization
};

struct TrainingTrace {
    std::vector<RoundRecord> rounds;
    std::vector<std::string> warnings;
};

/// 0.5 * ln((1 + cor_sum - mis_sum) / (1 - cor_sum + mis_sum)).
///
/// Requires nonnegative sums with cor_sum + mis_sum <= 1 (std::domain_error
/// otherwise). Log arguments are floored at 1e-10 so a weak learner with
/// no cost-weighted error yields a large finite alpha.
double compute_alpha(double cor_sum, double mis_sum);

/// Shared boosting loop. `costs` must have one entry per training instance.
BoostModel train_boost(const Dataset& ds, const CostVector& costs, const BoostConfig& config,
                       Algorithm tag, TrainingTrace* trace = nullptr);

/// Locality costs from `config.knn`/`config.delta`, then the shared loop.
BoostModel train_liuboost(const Dataset& ds, const BoostConfig& config,
                          TrainingTrace* trace = nullptr);

/// Shared loop with all costs 1.
BoostModel train_rusboost(const Dataset& ds, const BoostConfig& config,
                          TrainingTrace* trace = nullptr);

BoostModel train(Algorithm algorithm, const Dataset& ds, const BoostConfig& config,
                 TrainingTrace* trace = nullptr);

/// g(x). Throws std::logic_error on an empty model, std::invalid_argument on
/// a dimension mismatch.
double decision_score(const BoostModel& model, std::span<const double> x,
                      ScoreMode mode = ScoreMode::hard_vote);

/// sign(g) with g == 0 resolved to -1.
int classify(const BoostModel& model, std::span<const double> x);

std::vector<double> decision_scores(const BoostModel& model, const Matrix& features,
                                    ScoreMode mode = ScoreMode::hard_vote);

inline constexpr int kModelSchemaVersion = 1;

nlohmann::json model_to_json(const BoostModel& model);
/// Throws std::runtime_error on schema mismatch or malformed documents.
BoostModel model_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const BoostConfig& config);
BoostConfig config_from_json(const nlohmann::json& doc);

} // namespace liuboost
