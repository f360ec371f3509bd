#include "liuboost/bench.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace liuboost;

namespace {

std::vector<fs::path> dat_files(const fs::path& dir)
{
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".dat")
            out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty())
        throw std::runtime_error("no .dat files in " + dir.string());
    return out;
}

std::vector<Algorithm> parse_algorithms(const std::string& list)
{
    std::vector<Algorithm> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto a = parse_algorithm(item);
        if (!a)
            throw std::runtime_error("unknown algorithm '" + item + "'");
        if (std::find(out.begin(), out.end(), *a) == out.end())
            out.push_back(*a);
    }
    return out;
}

struct RunOptions {
    std::string data_dir;
    std::string algos = "liuboost,rusboost";
    std::string out = "report.json";
    std::string format = "json";
    std::string score_mode = "hard_vote";
    ExperimentConfig cfg;
};

void add_model_options(CLI::App* app, ExperimentConfig& cfg)
{
    app->add_option("--rounds", cfg.boost.rounds, "boosting rounds T")->capture_default_str();
    app->add_option("--knn", cfg.boost.knn, "neighbors k for locality costs")->capture_default_str();
    app->add_option("--delta", cfg.boost.delta, "cost used when a neighbor count is zero")->capture_default_str();
    app->add_option("--maj-frac", cfg.boost.majority_fraction, "majority share after undersampling")
        ->capture_default_str();
    app->add_option("--max-depth", cfg.boost.tree.max_depth, "tree depth limit")->capture_default_str();
    app->add_option("--min-leaf", cfg.boost.tree.min_leaf_fraction, "minimum child weight fraction")
        ->capture_default_str();
    app->add_option("--seed", cfg.master_seed, "master seed")->capture_default_str();
    app->add_option("--folds", cfg.folds, "cross-validation folds")->capture_default_str();
}

void print_warnings(const EvalReport& report)
{
    for (const auto& d : report.datasets) {
        if (!d.ok)
            std::cerr << "warning: " << d.name << ": " << d.error << '\n';
        for (const auto& w : d.warnings)
            std::cerr << "warning: " << d.name << ": " << w << '\n';
    }
    for (const auto& c : report.comparisons)
        if (!c.note.empty())
            std::cerr << "warning: " << c.metric << " comparison: " << c.note << '\n';
}

int cmd_run(RunOptions& o)
{
    o.cfg.dataset_paths = dat_files(o.data_dir);
    o.cfg.algorithms = parse_algorithms(o.algos);
    auto mode = parse_score_mode(o.score_mode);
    if (!mode)
        throw std::runtime_error("unknown score mode '" + o.score_mode + "'");
    o.cfg.score_mode = *mode;

    const auto report = run_experiment(o.cfg);
    print_warnings(report);
    emit_report(report, o.format == "csv" ? ReportFormat::csv : ReportFormat::json, o.out);

    for (const auto& c : report.comparisons) {
        std::cerr << c.metric << ": " << to_string(c.challenger) << " wins " << c.wins << ", losses "
                  << c.losses << ", ties " << c.ties;
        if (c.wilcoxon_drop)
            std::cerr << ", wilcoxon p=" << c.wilcoxon_drop->p_two_sided;
        std::cerr << '\n';
    }
    return 0;
}

int cmd_wilcoxon(const std::string& path, const std::string& metric, const std::string& zeros)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    const auto report = report_from_json(nlohmann::json::parse(in));
    const auto z = parse_zero_handling(zeros);
    if (!z)
        throw std::runtime_error("unknown zero handling '" + zeros + "'");
    const auto pairs = metric_pairs(report, metric, Algorithm::rusboost, Algorithm::liuboost);
    const auto r = wilcoxon_signed_rank(pairs, {*z});
    auto doc = rank_test_to_json(r);
    doc["metric"] = metric;
    doc["pairs"] = pairs.size();
    std::cout << doc.dump(2) << '\n';
    return 0;
}

int cmd_curves(const std::string& dataset, const std::string& out_path, ExperimentConfig cfg)
{
    const auto ds = load_keel_file(dataset);
    for (const auto& w : stratified_folds(ds, cfg.folds, 0).warnings)
        std::cerr << "warning: " << ds.name << ": " << w << '\n';
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + out_path + " for writing");
    out << "algorithm,curve,x,y\n";
    for (auto algo : {Algorithm::liuboost, Algorithm::rusboost}) {
        const auto sl = cross_validated_scores(ds, algo, cfg);
        for (auto [name, curve] : {std::pair{"roc", roc_curve(sl)}, std::pair{"pr", pr_curve(sl)}}) {
            std::ostringstream body;
            write_curve_csv(body, curve, "x", "y");
            std::istringstream lines(body.str());
            std::string line;
            std::getline(lines, line); // header
            while (std::getline(lines, line))
                out << to_string(algo) << ',' << name << ',' << line << '\n';
        }
        std::cerr << to_string(algo) << ": auroc " << auroc(sl) << ", aupr " << aupr(sl) << '\n';
    }
    if (!out.flush())
        throw std::runtime_error("failed writing " + out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LIUBoost / RUSBoost benchmark harness"};
    app.require_subcommand(1);

    RunOptions run;
    auto* run_cmd = app.add_subcommand("run", "cross-validate algorithms over a dataset directory");
    run_cmd->add_option("--data-dir", run.data_dir, "directory of KEEL .dat files")->required();
    run_cmd->add_option("--algos", run.algos, "comma-separated algorithms")->capture_default_str();
    run_cmd->add_option("--repeats", run.cfg.repeats, "cross-validation repeats")->capture_default_str();
    add_model_options(run_cmd, run.cfg);
    run_cmd->add_option("--out", run.out, "report path")->capture_default_str();
    run_cmd->add_option("--format", run.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    run_cmd->add_option("--score-mode", run.score_mode, "hard_vote or confidence")->capture_default_str();
    run_cmd->add_option("--threads", run.cfg.threads, "worker threads")->capture_default_str();
    run_cmd->add_flag("--timings", run.cfg.record_timings, "record wall-clock timings in the report");

    std::string report_path;
    std::string metric = "auroc";
    std::string zeros = "drop";
    auto* wil_cmd = app.add_subcommand("wilcoxon", "signed-rank test over a saved report");
    wil_cmd->add_option("--report", report_path, "JSON report from `run`")->required();
    wil_cmd->add_option("--metric", metric)->check(CLI::IsMember({"auroc", "aupr"}))->capture_default_str();
    wil_cmd->add_option("--zeros", zeros)->check(CLI::IsMember({"drop", "pratt"}))->capture_default_str();

    std::string curve_dataset;
    std::string curve_out = "curves.csv";
    ExperimentConfig curve_cfg;
    auto* curve_cmd = app.add_subcommand("curves", "out-of-fold ROC and PR points for one dataset");
    curve_cmd->add_option("--dataset", curve_dataset, "KEEL .dat file")->required();
    curve_cmd->add_option("--out", curve_out, "CSV path")->capture_default_str();
    add_model_options(curve_cmd, curve_cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd)
            return cmd_run(run);
        if (*wil_cmd)
            return cmd_wilcoxon(report_path, metric, zeros);
        if (*curve_cmd) {
            curve_cfg.validate();
            return cmd_curves(curve_dataset, curve_out, curve_cfg);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
