// lswarm: command-line front end for lifelong swarm evolution experiments.
#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"
#include "lswarm/expio/config.hpp"
#include "lswarm/expio/runner.hpp"
#include "lswarm/neat/serialize.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <iostream>

namespace {

using namespace lswarm;

// Exit codes: 0 ok, 1 runtime failure, 2 invalid configuration or input.
constexpr int kRuntimeFailure = 1;
constexpr int kBadInput = 2;

expio::ExperimentConfig load(const std::string& path, const std::vector<std::string>& overrides)
{
    expio::ExperimentConfig cfg = path.empty() ? expio::ExperimentConfig{} : expio::load_config(path);
    for (const auto& o : overrides) {
        expio::apply_override(cfg, o);
    }
    cfg.validate();
    return cfg;
}

std::vector<double> parse_lambdas(const std::string& text)
{
    std::vector<double> out;
    std::string_view rest = text;
    while (!trim(rest).empty()) {
        const auto comma = rest.find(',');
        const auto item = trim(rest.substr(0, comma));
        try {
            out.push_back(parse_double(item));
        } catch (const FormatError&) {
            throw ConfigError("lambdas: '" + std::string(item) + "' is not a number");
        }
        if (comma == std::string_view::npos) {
            break;
        }
        rest.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Lifelong NEAT evolution of swarm foraging controllers"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")->capture_default_str();

    std::string config_path;
    std::vector<std::string> overrides;

    auto* evolve = app.add_subcommand("evolve", "Run a lifelong experiment for every configured seed");
    evolve->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    evolve->add_option("--set", overrides, "Override a config key (key=value)");

    std::string lambdas;
    auto* sweep = app.add_subcommand("sweep-lambda", "Compare regularization strengths");
    sweep->add_option("--config", config_path, "Experiment config file")->required()->check(CLI::ExistingFile);
    sweep->add_option("--lambdas", lambdas, "Comma-separated lambda values")->required();
    sweep->add_option("--set", overrides, "Override a config key (key=value)");

    std::string genome_path;
    std::vector<std::string> task_args;
    std::size_t n_envs = 100;
    std::uint64_t seed = 0;
    auto* eval = app.add_subcommand("eval", "Evaluate a saved controller on one or more tasks");
    eval->add_option("--genome", genome_path, "Genome file")->required()->check(CLI::ExistingFile);
    eval->add_option("--task", task_args, "Task id or target colour (repeatable)")->required();
    eval->add_option("--n-envs", n_envs, "Evaluation environments per task")->capture_default_str();
    eval->add_option("--seed", seed, "Environment seed")->capture_default_str();
    eval->add_option("--config", config_path, "Experiment config supplying colours and arena settings")
        ->check(CLI::ExistingFile);
    eval->add_option("--set", overrides, "Override a config key (key=value)");

    std::string task_arg;
    std::string out_dir;
    bool no_frames = false;
    auto* replay = app.add_subcommand("replay", "Record one episode as a trajectory log and SVG frames");
    replay->add_option("--genome", genome_path, "Genome file")->required()->check(CLI::ExistingFile);
    replay->add_option("--task", task_arg, "Task id or target colour")->required();
    replay->add_option("--seed", seed, "Environment seed")->capture_default_str();
    replay->add_option("--out", out_dir, "Output directory")->required();
    replay->add_flag("--no-frames", no_frames, "Write the trajectory log only");
    replay->add_option("--config", config_path, "Experiment config supplying colours and arena settings")
        ->check(CLI::ExistingFile);
    replay->add_option("--set", overrides, "Override a config key (key=value)");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (evolve->parsed()) {
            const auto cfg = load(config_path, overrides);
            const auto root = expio::output_root(cfg);
            const auto manifest = expio::run_experiment(cfg, root);
            std::cout << "wrote " << manifest.runs.size() << " runs and aggregate to " << root.string() << '\n';
        } else if (sweep->parsed()) {
            const auto cfg = load(config_path, overrides);
            const auto values = parse_lambdas(lambdas);
            const auto root = expio::output_root(cfg);
            const auto rows = expio::sweep_lambda(cfg, values, root);
            std::printf("%10s %12s %14s %14s\n", "lambda", "current_C", "R^top", "F^top");
            for (const auto& r : rows) {
                std::printf("%10g %12.4f %14.4f %14.4f\n", r.lambda, r.current_c, r.retention_top, r.forgetting_top);
            }
            std::cout << "wrote " << (root / "sweep.csv").string() << '\n';
        } else if (eval->parsed()) {
            const auto cfg = load(config_path, overrides);
            const auto doc = neat::load_genome(genome_path);
            std::vector<int> ids;
            for (const auto& t : task_args) {
                ids.push_back(expio::resolve_task(cfg, t));
            }
            for (const auto& report : expio::evaluate_genome(doc.genome, cfg, ids, n_envs, seed)) {
                std::printf("task %d (%s): mean fitness %.4f over %zu environments\n", report.task_id,
                            report.name.c_str(), report.mean, report.episodes.size());
                std::printf("  episodes:");
                for (double e : report.episodes) {
                    std::printf(" %g", e);
                }
                std::printf("\n");
            }
        } else if (replay->parsed()) {
            const auto cfg = load(config_path, overrides);
            const auto doc = neat::load_genome(genome_path);
            const int id = expio::resolve_task(cfg, task_arg);
            const auto result = expio::replay_genome(doc.genome, cfg, id, seed, out_dir, !no_frames);
            std::printf("episode reward %lld, %zu log records, %zu frames in %s\n", result.reward,
                        result.log.records().size(), result.frames, out_dir.c_str());
        }
    } catch (const ConfigError& e) {
        spdlog::error("invalid configuration: {}", e.what());
        return kBadInput;
    } catch (const FormatError& e) {
        spdlog::error("{}", e.what());
        return kBadInput;
    } catch (const StructuralError& e) {
        spdlog::error("invalid genome: {}", e.what());
        return kBadInput;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kRuntimeFailure;
    }
    return 0;
}
