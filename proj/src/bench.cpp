#include "liuboost/bench.hpp"
#include "format.hpp"
#include "liuboost/random.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace liuboost {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

MetricSummary summarize(const std::vector<double>& values)
{
    MetricSummary s;
    s.count = values.size();
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

bool has_both_classes(const std::vector<int>& labels)
{
    const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool neg = std::find(labels.begin(), labels.end(), -1) != labels.end();
    return pos && neg;
}

/// Scaler fit on the training rows, applied to both splits.
std::pair<Dataset, Dataset> split_and_scale(const Dataset& ds, const FoldPlan& plan, std::size_t fold)
{
    const auto train_idx = plan.train_indices(fold);
    Dataset train = ds.subset(train_idx);
    Dataset test = ds.subset(plan.folds[fold]);
    const auto scaler = MinMaxScaler::fit(train.features);
    train.features = scaler.transform(train.features);
    test.features = scaler.transform(test.features);
    return {std::move(train), std::move(test)};
}

BoostConfig run_config(const ExperimentConfig& cfg, std::uint64_t seed)
{
    BoostConfig c = cfg.boost;
    c.seed = seed;
    return c;
}

struct Cell {
    std::size_t dataset;
    std::size_t repeat;
    std::size_t fold;
    std::size_t algo;
};

struct CellOutcome {
    bool evaluated = false;
    FoldResult result;
    std::string warning;
    double seconds = 0.0;
};

nlohmann::json summary_to_json(const MetricSummary& s)
{
    return {{"mean", s.mean}, {"std", s.std}, {"count", s.count}};
}

MetricSummary summary_from_json(const nlohmann::json& j)
{
    return {j.at("mean").get<double>(), j.at("std").get<double>(), j.at("count").get<std::size_t>()};
}

RankTestResult rank_test_from_json(const nlohmann::json& j)
{
    RankTestResult r;
    r.w_minus = j.at("w_minus").get<double>();
    r.w_plus = j.at("w_plus").get<double>();
    r.n_effective = j.at("n_effective").get<std::size_t>();
    r.n_zero = j.at("n_zero").get<std::size_t>();
    r.p_two_sided = j.at("p_two_sided").get<double>();
    r.p_greater = j.at("p_greater").get<double>();
    r.p_less = j.at("p_less").get<double>();
    const auto m = j.at("method").get<std::string>();
    r.method = m == "exact" ? PValueMethod::exact : PValueMethod::normal;
    r.zeros = parse_zero_handling(j.at("zeros").get<std::string>()).value_or(ZeroHandling::drop);
    return r;
}

Algorithm algorithm_from_json(const nlohmann::json& j)
{
    auto a = parse_algorithm(j.get<std::string>());
    if (!a)
        throw std::runtime_error("unknown algorithm '" + j.get<std::string>() + "' in report");
    return *a;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

} // namespace

void ExperimentConfig::validate() const
{
    if (repeats < 1)
        throw std::invalid_argument("repeats must be at least 1");
    if (folds < 2)
        throw std::invalid_argument("folds must be at least 2");
    if (algorithms.empty())
        throw std::invalid_argument("at least one algorithm is required");
    if (boost.rounds < 1)
        throw std::invalid_argument("rounds must be at least 1");
    if (boost.knn < 1)
        throw std::invalid_argument("knn must be at least 1");
    if (!(boost.delta > 0.0 && boost.delta <= 1.0))
        throw std::invalid_argument("delta must lie in (0, 1]");
    if (!(boost.majority_fraction > 0.0 && boost.majority_fraction < 1.0))
        throw std::invalid_argument("majority fraction must lie in (0, 1)");
    if (!(boost.tree.min_leaf_fraction >= 0.0 && boost.tree.min_leaf_fraction < 0.5))
        throw std::invalid_argument("min leaf fraction must lie in [0, 0.5)");
    if (!(boost.tree.min_gain >= 0.0))
        throw std::invalid_argument("min gain must be nonnegative");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view dataset, std::size_t repeat,
                          std::size_t fold, std::string_view purpose)
{
    return mix_seed({master_seed, hash_string(dataset), repeat, fold, hash_string(purpose)});
}

const AlgorithmResult* DatasetResult::find(Algorithm a) const
{
    for (const auto& r : results)
        if (r.algorithm == a)
            return &r;
    return nullptr;
}

EvalReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    const auto start = Clock::now();

    EvalReport report;
    report.config = config;

    std::vector<Dataset> data;
    std::vector<std::size_t> data_slot; // report index per loaded dataset
    for (const auto& path : config.dataset_paths) {
        DatasetResult dr;
        dr.path = path.string();
        dr.name = path.stem().string();
        try {
            Dataset ds = load_keel_file(path);
            ds.validate();
            dr.instances = ds.size();
            dr.features = ds.dims();
            dr.minority = ds.minority_count;
            dr.imbalance_ratio = imbalance_ratio(ds);
            data_slot.push_back(report.datasets.size());
            data.push_back(std::move(ds));
        } catch (const std::exception& e) {
            dr.ok = false;
            dr.error = e.what();
        }
        report.datasets.push_back(std::move(dr));
    }

    // Fold plans, one per (dataset, repeat).
    std::vector<std::vector<FoldPlan>> plans(data.size());
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < data.size(); ++d) {
        auto& dr = report.datasets[data_slot[d]];
        try {
            for (std::size_t r = 0; r < config.repeats; ++r) {
                auto plan = stratified_folds(data[d], config.folds,
                                             derive_seed(config.master_seed, data[d].name, r, 0, "folds"));
                if (r == 0)
                    dr.warnings.insert(dr.warnings.end(), plan.warnings.begin(), plan.warnings.end());
                plans[d].push_back(std::move(plan));
            }
        } catch (const std::exception& e) {
            dr.ok = false;
            dr.error = e.what();
            plans[d].clear();
            continue;
        }
        for (std::size_t r = 0; r < config.repeats; ++r)
            for (std::size_t f = 0; f < config.folds; ++f)
                for (std::size_t a = 0; a < config.algorithms.size(); ++a)
                    cells.push_back({d, r, f, a});
    }

    std::vector<CellOutcome> outcomes(cells.size());
    const auto run_cell = [&](std::size_t idx) {
        const Cell& c = cells[idx];
        const auto cell_start = Clock::now();
        CellOutcome& out = outcomes[idx];
        const Dataset& ds = data[c.dataset];
        const FoldPlan& plan = plans[c.dataset][c.repeat];
        const Algorithm algo = config.algorithms[c.algo];
        out.result.repeat = c.repeat;
        out.result.fold = c.fold;

        std::vector<int> test_labels;
        for (auto i : plan.folds[c.fold])
            test_labels.push_back(ds.labels[i]);
        if (!has_both_classes(test_labels)) {
            out.warning = "repeat " + std::to_string(c.repeat) + " fold " + std::to_string(c.fold) +
                          ": test split lacks a class; fold skipped";
            out.seconds = seconds_since(cell_start);
            return;
        }
        try {
            auto [train, test] = split_and_scale(ds, plan, c.fold);
            const auto seed = derive_seed(config.master_seed, ds.name, c.repeat, c.fold, to_string(algo));
            const auto model = liuboost::train(algo, train, run_config(config, seed));
            ScoredLabels sl{decision_scores(model, test.features, config.score_mode), test.labels};
            out.result.auroc = auroc(sl);
            out.result.aupr = aupr(sl);
            out.result.stages = model.trained_iterations();
            out.result.stopped_early = model.stopped_early;
            out.evaluated = true;
        } catch (const std::exception& e) {
            out.warning = "repeat " + std::to_string(c.repeat) + " fold " + std::to_string(c.fold) +
                          " (" + std::string(to_string(algo)) + "): " + e.what();
        }
        out.seconds = seconds_since(cell_start);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < cells.size(); i = next++)
                    run_cell(i);
            });
        }
        for (auto& t : pool)
            t.join();
    }

    // Aggregate in cell order, which is fixed by the configuration.
    for (std::size_t d = 0; d < data.size(); ++d) {
        auto& dr = report.datasets[data_slot[d]];
        if (!dr.ok)
            continue;
        for (std::size_t a = 0; a < config.algorithms.size(); ++a) {
            AlgorithmResult ar;
            ar.algorithm = config.algorithms[a];
            double secs = 0.0;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (cells[i].dataset != d || cells[i].algo != a)
                    continue;
                const auto& o = outcomes[i];
                secs += o.seconds;
                if (o.evaluated)
                    ar.folds.push_back(o.result);
                else
                    ++ar.skipped_folds;
                // Skipped-fold notices are identical across algorithms; keep one copy.
                if (!o.warning.empty() && (a == 0 || o.warning.find('(') != std::string::npos))
                    dr.warnings.push_back(o.warning);
            }
            std::vector<double> au;
            std::vector<double> ap;
            for (const auto& f : ar.folds) {
                au.push_back(f.auroc);
                ap.push_back(f.aupr);
            }
            ar.auroc = summarize(au);
            ar.aupr = summarize(ap);
            if (config.record_timings)
                ar.seconds = secs;
            dr.results.push_back(std::move(ar));
        }
    }

    const auto has = [&](Algorithm a) {
        return std::find(config.algorithms.begin(), config.algorithms.end(), a) != config.algorithms.end();
    };
    if (has(Algorithm::liuboost) && has(Algorithm::rusboost)) {
        for (const char* metric : {"auroc", "aupr"})
            report.comparisons.push_back(compare(report, metric, Algorithm::rusboost, Algorithm::liuboost));
    }
    if (config.record_timings)
        report.seconds = seconds_since(start);
    return report;
}

std::vector<std::pair<double, double>> metric_pairs(const EvalReport& report, std::string_view metric,
                                                    Algorithm baseline, Algorithm challenger)
{
    if (metric != "auroc" && metric != "aupr")
        throw std::invalid_argument("unknown metric '" + std::string(metric) + "'");
    std::vector<std::pair<double, double>> pairs;
    for (const auto& dr : report.datasets) {
        if (!dr.ok)
            continue;
        const auto* a = dr.find(baseline);
        const auto* b = dr.find(challenger);
        if (!a || !b)
            continue;
        const auto& sa = metric == "auroc" ? a->auroc : a->aupr;
        const auto& sb = metric == "auroc" ? b->auroc : b->aupr;
        if (sa.count == 0 || sb.count == 0)
            continue;
        pairs.emplace_back(sa.mean, sb.mean);
    }
    return pairs;
}

Comparison compare(const EvalReport& report, std::string_view metric, Algorithm baseline,
                   Algorithm challenger)
{
    Comparison c;
    c.metric = std::string(metric);
    c.baseline = baseline;
    c.challenger = challenger;
    const auto pairs = metric_pairs(report, metric, baseline, challenger);
    for (auto [a, b] : pairs) {
        if (b > a)
            ++c.wins;
        else if (b < a)
            ++c.losses;
        else
            ++c.ties;
    }
    try {
        c.wilcoxon_drop = wilcoxon_signed_rank(pairs, {ZeroHandling::drop});
        c.wilcoxon_pratt = wilcoxon_signed_rank(pairs, {ZeroHandling::pratt});
    } catch (const std::invalid_argument& e) {
        c.wilcoxon_drop.reset();
        c.wilcoxon_pratt.reset();
        c.note = e.what();
    }
    return c;
}

nlohmann::json rank_test_to_json(const RankTestResult& r)
{
    return {
        {"w_minus", r.w_minus},
        {"w_plus", r.w_plus},
        {"n_effective", r.n_effective},
        {"n_zero", r.n_zero},
        {"p_two_sided", r.p_two_sided},
        {"p_greater", r.p_greater},
        {"p_less", r.p_less},
        {"method", to_string(r.method)},
        {"zeros", to_string(r.zeros)},
    };
}

nlohmann::json report_to_json(const EvalReport& report)
{
    using nlohmann::json;
    const auto& cfg = report.config;
    json paths = json::array();
    for (const auto& p : cfg.dataset_paths)
        paths.push_back(p.string());
    json algos = json::array();
    for (auto a : cfg.algorithms)
        algos.push_back(to_string(a));

    json config = {
        {"dataset_paths", std::move(paths)},
        {"algorithms", std::move(algos)},
        {"repeats", cfg.repeats},
        {"folds", cfg.folds},
        {"rounds", cfg.boost.rounds},
        {"knn", cfg.boost.knn},
        {"delta", cfg.boost.delta},
        {"majority_fraction", cfg.boost.majority_fraction},
        {"undersample", cfg.boost.undersample},
        {"max_retries", cfg.boost.max_retries},
        {"tree",
         {{"max_depth", cfg.boost.tree.max_depth},
          {"min_leaf_fraction", cfg.boost.tree.min_leaf_fraction},
          {"min_gain", cfg.boost.tree.min_gain}}},
        {"score_mode", to_string(cfg.score_mode)},
        {"master_seed", cfg.master_seed},
    };

    json datasets = json::array();
    for (const auto& dr : report.datasets) {
        json results = json::array();
        for (const auto& ar : dr.results) {
            json folds = json::array();
            for (const auto& f : ar.folds)
                folds.push_back({{"repeat", f.repeat},
                                 {"fold", f.fold},
                                 {"auroc", f.auroc},
                                 {"aupr", f.aupr},
                                 {"stages", f.stages},
                                 {"stopped_early", f.stopped_early}});
            json r = {{"algorithm", to_string(ar.algorithm)},
                      {"auroc", summary_to_json(ar.auroc)},
                      {"aupr", summary_to_json(ar.aupr)},
                      {"skipped_folds", ar.skipped_folds},
                      {"folds", std::move(folds)}};
            if (ar.seconds)
                r["seconds"] = *ar.seconds;
            results.push_back(std::move(r));
        }
        datasets.push_back({{"name", dr.name},
                            {"path", dr.path},
                            {"ok", dr.ok},
                            {"error", dr.error},
                            {"instances", dr.instances},
                            {"features", dr.features},
                            {"minority", dr.minority},
                            {"imbalance_ratio", dr.imbalance_ratio},
                            {"warnings", dr.warnings},
                            {"results", std::move(results)}});
    }

    json comparisons = json::array();
    for (const auto& c : report.comparisons) {
        comparisons.push_back({{"metric", c.metric},
                               {"baseline", to_string(c.baseline)},
                               {"challenger", to_string(c.challenger)},
                               {"wins", c.wins},
                               {"losses", c.losses},
                               {"ties", c.ties},
                               {"wilcoxon_drop", c.wilcoxon_drop ? rank_test_to_json(*c.wilcoxon_drop) : json()},
                               {"wilcoxon_pratt", c.wilcoxon_pratt ? rank_test_to_json(*c.wilcoxon_pratt) : json()},
                               {"note", c.note}});
    }

    json doc = {{"schema_version", report.schema_version},
                {"config", std::move(config)},
                {"datasets", std::move(datasets)},
                {"comparisons", std::move(comparisons)}};
    if (report.seconds)
        doc["seconds"] = *report.seconds;
    return doc;
}

EvalReport report_from_json(const nlohmann::json& doc)
{
    try {
        EvalReport report;
        report.schema_version = doc.at("schema_version").get<int>();
        if (report.schema_version != kReportSchemaVersion)
            throw std::runtime_error("unsupported report schema version " +
                                     std::to_string(report.schema_version));
        const auto& c = doc.at("config");
        auto& cfg = report.config;
        cfg.dataset_paths.clear();
        for (const auto& p : c.at("dataset_paths"))
            cfg.dataset_paths.emplace_back(p.get<std::string>());
        cfg.algorithms.clear();
        for (const auto& a : c.at("algorithms"))
            cfg.algorithms.push_back(algorithm_from_json(a));
        cfg.repeats = c.at("repeats").get<std::size_t>();
        cfg.folds = c.at("folds").get<std::size_t>();
        cfg.boost.rounds = c.at("rounds").get<std::size_t>();
        cfg.boost.knn = c.at("knn").get<std::size_t>();
        cfg.boost.delta = c.at("delta").get<double>();
        cfg.boost.majority_fraction = c.at("majority_fraction").get<double>();
        cfg.boost.undersample = c.at("undersample").get<bool>();
        cfg.boost.max_retries = c.at("max_retries").get<std::size_t>();
        cfg.boost.tree.max_depth = c.at("tree").at("max_depth").get<std::size_t>();
        cfg.boost.tree.min_leaf_fraction = c.at("tree").at("min_leaf_fraction").get<double>();
        cfg.boost.tree.min_gain = c.at("tree").at("min_gain").get<double>();
        cfg.score_mode = parse_score_mode(c.at("score_mode").get<std::string>()).value_or(ScoreMode::hard_vote);
        cfg.master_seed = c.at("master_seed").get<std::uint64_t>();

        for (const auto& d : doc.at("datasets")) {
            DatasetResult dr;
            dr.name = d.at("name").get<std::string>();
            dr.path = d.at("path").get<std::string>();
            dr.ok = d.at("ok").get<bool>();
            dr.error = d.at("error").get<std::string>();
            dr.instances = d.at("instances").get<std::size_t>();
            dr.features = d.at("features").get<std::size_t>();
            dr.minority = d.at("minority").get<std::size_t>();
            dr.imbalance_ratio = d.at("imbalance_ratio").get<double>();
            dr.warnings = d.at("warnings").get<std::vector<std::string>>();
            for (const auto& r : d.at("results")) {
                AlgorithmResult ar;
                ar.algorithm = algorithm_from_json(r.at("algorithm"));
                ar.auroc = summary_from_json(r.at("auroc"));
                ar.aupr = summary_from_json(r.at("aupr"));
                ar.skipped_folds = r.at("skipped_folds").get<std::size_t>();
                for (const auto& f : r.at("folds"))
                    ar.folds.push_back({f.at("repeat").get<std::size_t>(), f.at("fold").get<std::size_t>(),
                                        f.at("auroc").get<double>(), f.at("aupr").get<double>(),
                                        f.at("stages").get<std::size_t>(), f.at("stopped_early").get<bool>()});
                if (r.contains("seconds"))
                    ar.seconds = r.at("seconds").get<double>();
                dr.results.push_back(std::move(ar));
            }
            report.datasets.push_back(std::move(dr));
        }
        for (const auto& j : doc.at("comparisons")) {
            Comparison cmp;
            cmp.metric = j.at("metric").get<std::string>();
            cmp.baseline = algorithm_from_json(j.at("baseline"));
            cmp.challenger = algorithm_from_json(j.at("challenger"));
            cmp.wins = j.at("wins").get<std::size_t>();
            cmp.losses = j.at("losses").get<std::size_t>();
            cmp.ties = j.at("ties").get<std::size_t>();
            if (!j.at("wilcoxon_drop").is_null())
                cmp.wilcoxon_drop = rank_test_from_json(j.at("wilcoxon_drop"));
            if (!j.at("wilcoxon_pratt").is_null())
                cmp.wilcoxon_pratt = rank_test_from_json(j.at("wilcoxon_pratt"));
            cmp.note = j.at("note").get<std::string>();
            report.comparisons.push_back(std::move(cmp));
        }
        if (doc.contains("seconds"))
            report.seconds = doc.at("seconds").get<double>();
        return report;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("malformed report: ") + e.what());
    }
}

void write_report_csv(std::ostream& out, const EvalReport& report)
{
    using detail::format_double;
    const auto v = std::to_string(report.schema_version);
    out << "schema_version,kind,dataset,algorithm,auroc_mean,auroc_std,aupr_mean,aupr_std,n_values,"
           "wins,losses,ties,w_minus,w_plus,p_two_sided\n";
    for (const auto& dr : report.datasets) {
        for (const auto& ar : dr.results) {
            out << v << ",result," << csv_field(dr.name) << ',' << to_string(ar.algorithm) << ','
                << format_double(ar.auroc.mean) << ',' << format_double(ar.auroc.std) << ','
                << format_double(ar.aupr.mean) << ',' << format_double(ar.aupr.std) << ','
                << ar.auroc.count << ",,,,,,\n";
        }
    }
    for (const auto& c : report.comparisons) {
        out << v << ",summary," << c.metric << ',' << to_string(c.challenger) << "_vs_"
            << to_string(c.baseline) << ",,,,,," << c.wins << ',' << c.losses << ',' << c.ties << ',';
        if (c.wilcoxon_drop)
            out << format_double(c.wilcoxon_drop->w_minus) << ',' << format_double(c.wilcoxon_drop->w_plus)
                << ',' << format_double(c.wilcoxon_drop->p_two_sided);
        else
            out << ",,";
        out << '\n';
    }
}

void emit_report(const EvalReport& report, ReportFormat format, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (format == ReportFormat::json)
        out << report_to_json(report).dump(2) << '\n';
    else
        write_report_csv(out, report);
    out.flush();
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

ScoredLabels cross_validated_scores(const Dataset& ds, Algorithm algorithm,
                                    const ExperimentConfig& config, std::size_t repeat)
{
    const auto plan = stratified_folds(ds, config.folds,
                                       derive_seed(config.master_seed, ds.name, repeat, 0, "folds"));
    ScoredLabels sl;
    sl.labels = ds.labels;
    sl.scores.assign(ds.size(), 0.0);
    for (std::size_t f = 0; f < plan.size(); ++f) {
        auto [train, test] = split_and_scale(ds, plan, f);
        const auto seed = derive_seed(config.master_seed, ds.name, repeat, f, to_string(algorithm));
        const auto model = liuboost::train(algorithm, train, run_config(config, seed));
        const auto scores = decision_scores(model, test.features, config.score_mode);
        for (std::size_t n = 0; n < scores.size(); ++n)
            sl.scores[plan.folds[f][n]] = scores[n];
    }
    return sl;
}

} // namespace liuboost
