#pragma once

#include "liuboost/ensemble.hpp"
#include "liuboost/metrics.hpp"
#include "liuboost/stats.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace liuboost {

inline constexpr int kReportSchemaVersion = 1;

struct ExperimentConfig {
    std::vector<std::filesystem::path> dataset_paths;
    std::vector<Algorithm> algorithms{Algorithm::liuboost, Algorithm::rusboost};
    std::size_t repeats = 5;
    std::size_t folds = 10;
    /// rounds, knn, delta, majority_fraction, tree params. The seed field is
    /// ignored; per-run seeds come from `master_seed`.
    BoostConfig boost;
    ScoreMode score_mode = ScoreMode::hard_vote;
    std::uint64_t master_seed = 1;
    /// Worker threads; results do not depend on this.
    std::size_t threads = 1;
    /// Adds wall-clock timings to the report (which then is no longer
    /// byte-reproducible).
    bool record_timings = false;

    /// Throws std::invalid_argument when out of range.
    void validate() const;
};

/// Seed for one training run, independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view dataset, std::size_t repeat,
                          std::size_t fold, std::string_view purpose);

struct FoldResult {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    double auroc = 0.0;
    double aupr = 0.0;
    std::size_t stages = 0;
    bool stopped_early = false;
};

struct MetricSummary {
    double mean = 0.0;
    double std = 0.0; ///< sample standard deviation (n - 1)
    std::size_t count = 0;
};

struct AlgorithmResult {
    Algorithm algorithm = Algorithm::liuboost;
    std::vector<FoldResult> folds;
    /// Folds whose test split lacked a class (no AUROC/AUPR defined) or whose
    /// training failed.
    std::size_t skipped_folds = 0;
    MetricSummary auroc;
    MetricSummary aupr;
    std::optional<double> seconds;
};

struct DatasetResult {
    std::string name;
    std::string path;
    bool ok = true;
    std::string error;
    std::size_t instances = 0;
    std::size_t features = 0;
    std::size_t minority = 0;
    double imbalance_ratio = 0.0;
    std::vector<std::string> warnings;
    std::vector<AlgorithmResult> results;

    const AlgorithmResult* find(Algorithm a) const;
};

struct Comparison {
    std::string metric; ///< "auroc" or "aupr"
    Algorithm baseline = Algorithm::rusboost;
    Algorithm challenger = Algorithm::liuboost;
    std::size_t wins = 0;   ///< challenger mean > baseline mean
    std::size_t losses = 0;
    std::size_t ties = 0;
    std::optional<RankTestResult> wilcoxon_drop;
    std::optional<RankTestResult> wilcoxon_pratt;
    std::string note; ///< why a test is absent
};

struct EvalReport {
    int schema_version = kReportSchemaVersion;
    ExperimentConfig config;
    std::vector<DatasetResult> datasets;
    std::vector<Comparison> comparisons;
    std::optional<double> seconds;
};

/// Repeated stratified cross-validation of every configured algorithm on
/// every dataset, then per-metric comparisons over the dataset means.
/// Datasets that fail to load are reported with ok = false.
EvalReport run_experiment(const ExperimentConfig& config);

/// (baseline mean, challenger mean) per dataset that has both.
std::vector<std::pair<double, double>> metric_pairs(const EvalReport& report,
                                                    std::string_view metric,
                                                    Algorithm baseline, Algorithm challenger);

/// Win/loss/tie counts and both Wilcoxon variants. Fills `note` instead of
/// a test when fewer than 5 pairs exist or all differences vanish.
Comparison compare(const EvalReport& report, std::string_view metric, Algorithm baseline,
                   Algorithm challenger);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& doc);

nlohmann::json rank_test_to_json(const RankTestResult& r);

/// One row per (dataset, algorithm) then one summary row per comparison.
void write_report_csv(std::ostream& out, const EvalReport& report);

enum class ReportFormat { json, csv };

/// Throws std::runtime_error on I/O failure.
void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path);

/// Out-of-fold scores from one stratified CV pass, for curve export.
ScoredLabels cross_validated_scores(const Dataset& ds, Algorithm algorithm,
                                    const ExperimentConfig& config, std::size_t repeat = 0);

} // namespace liuboost
