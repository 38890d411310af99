#include "lswarm/expio/runner.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"
#include "lswarm/evolve/evaluation.hpp"
#include "lswarm/evolve/lifelong.hpp"
#include "lswarm/expio/plot.hpp"
#include "lswarm/net/phenotype.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace lswarm::expio {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        throw FormatError("cannot write " + path.string());
    }
}

const std::vector<std::string> kMetricFiles{"fitness.csv", "retention.csv", "forgetting.csv",
                                            "reference.csv", "species_count.csv"};

std::vector<std::string> keys_of(std::string_view file)
{
    if (file == "fitness.csv") {
        return {"generation", "task_id"};
    }
    if (file == "retention.csv") {
        return {"generation", "eval_task_id"};
    }
    if (file == "forgetting.csv") {
        return {"boundary_generation", "task_id"};
    }
    return {"generation"};
}

void write_plots(const fs::path& dir, const fs::path& plots, const ExperimentConfig& cfg)
{
    fs::create_directories(plots);
    write_text(plots / "fitness.svg",
               render_svg(fitness_plot(read_csv(dir / "fitness.csv"), read_csv(dir / "retention.csv"), cfg)));
    write_text(plots / "species_count.svg", render_svg(species_count_plot(read_csv(dir / "species_count.csv"), cfg)));
}

std::vector<std::string> list_artifacts(const fs::path& root)
{
    std::vector<std::string> out;
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
        const fs::path rel = fs::relative(it->path(), root);
        const std::string name = it->path().filename().string();
        if (it->is_directory() && (name == "checkpoints" || name == "stages")) {
            out.push_back(rel.generic_string() + "/");
            it.disable_recursion_pending();
        } else if (it->is_regular_file() && name != "manifest.json") {
            out.push_back(rel.generic_string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const evolve::FitnessRow& fitness_at(const evolve::LifelongMetrics& m, std::size_t generation)
{
    for (const auto& r : m.fitness) {
        if (r.generation == generation) {
            return r;
        }
    }
    throw ContractError("no fitness row for generation " + std::to_string(generation));
}

} // namespace

fs::path output_root(const ExperimentConfig& cfg)
{
    if (const char* env = std::getenv(kOutputRootEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return cfg.output_dir;
}

void write_manifest(const fs::path& path, const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["tool_version"] = m.tool_version;
    j["config_hash"] = m.config_hash;
    j["runs"] = nlohmann::ordered_json::array();
    for (const auto& r : m.runs) {
        j["runs"].push_back({{"seed", r.seed}, {"run_id", r.run_id}, {"lambda", r.lambda}});
    }
    j["aggregate_dir"] = m.aggregate_dir;
    j["artifacts"] = m.artifacts;
    write_text(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read " + path.string());
    }
    try {
        const auto j = nlohmann::json::parse(in);
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.config_hash = j.at("config_hash").get<std::string>();
        for (const auto& r : j.at("runs")) {
            m.runs.push_back({r.at("seed").get<std::uint64_t>(), r.at("run_id").get<std::string>(),
                              r.at("lambda").get<double>()});
        }
        m.aggregate_dir = j.at("aggregate_dir").get<std::string>();
        m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_run_outputs(const fs::path& dir, const evolve::LifelongMetrics& metrics, const ExperimentConfig& cfg)
{
    evolve::write_metrics(dir, metrics);
    CsvTable counts{{"generation", "alive_species"}, {}};
    for (const auto& row : metrics.census) {
        counts.rows.push_back({std::to_string(row.generation), std::to_string(row.alive.size())});
    }
    write_csv(dir / "species_count.csv", counts);
    write_plots(dir, dir / "plots", cfg);
    write_text(dir / "plots" / "species_lifespan.svg",
               lifespan_svg(read_csv(dir / "species.csv"), cfg.schedule.size() * cfg.generations_per_task));
}

void aggregate_runs(std::span<const fs::path> run_dirs, const fs::path& out_dir, const ExperimentConfig& cfg)
{
    fs::create_directories(out_dir);
    for (const auto& file : kMetricFiles) {
        std::vector<CsvTable> tables;
        for (const auto& d : run_dirs) {
            tables.push_back(read_csv(d / file));
        }
        const auto keys = keys_of(file);
        write_csv(out_dir / file, mean_table(tables, keys));
    }
    write_plots(out_dir, out_dir / "plots", cfg);
}

RunManifest run_experiment(const ExperimentConfig& cfg, const fs::path& root)
{
    cfg.validate();
    fs::create_directories(root);
    RunManifest manifest;
    manifest.config_hash = config_hash_hex(cfg);
    std::vector<fs::path> dirs;
    for (std::uint64_t seed : cfg.seeds) {
        const std::string id = "seed_" + std::to_string(seed);
        const fs::path dir = root / id;
        spdlog::info("seed {}: {} generations, lambda {}", seed, cfg.schedule.size() * cfg.generations_per_task,
                     cfg.regularization ? cfg.lambda_for(seed) : 0.0);
        evolve::LifelongConfig lc = cfg.run_config(seed);
        lc.output_dir = dir;
        const evolve::LifelongResult result = evolve::run_lifelong(lc);
        write_run_outputs(dir, result.metrics, cfg);
        manifest.runs.push_back({seed, id, cfg.regularization ? cfg.lambda_for(seed) : 0.0});
        dirs.push_back(dir);
    }
    aggregate_runs(dirs, root / manifest.aggregate_dir, cfg);
    write_text(root / "config.cfg", to_canonical_text(cfg));
    manifest.artifacts = list_artifacts(root);
    write_manifest(root / "manifest.json", manifest);
    return manifest;
}

SweepRow sweep_row(double lambda, std::span<const evolve::LifelongMetrics> per_seed, const ExperimentConfig& cfg)
{
    if (cfg.schedule.size() < 2 || cfg.generations_per_task == 0) {
        throw ConfigError("schedule: a lambda sweep needs at least two non-empty stages");
    }
    if (per_seed.empty()) {
        throw ContractError("sweep row needs at least one run");
    }
    const std::size_t end = 2 * cfg.generations_per_task - 1;
    const int first = cfg.task_by_target(cfg.schedule.front()).id;
    SweepRow row{lambda, 0.0, 0.0, 0.0};
    for (const auto& m : per_seed) {
        row.current_c += fitness_at(m, end).best_fitness;
        const auto r = std::find_if(m.retention.begin(), m.retention.end(), [&](const evolve::RetentionRow& x) {
            return x.generation == end && x.eval_task_id == first;
        });
        const auto f = std::find_if(m.forgetting.begin(), m.forgetting.end(), [&](const evolve::ForgettingRow& x) {
            return x.boundary_generation == end && x.task_id == first;
        });
        if (r == m.retention.end() || f == m.forgetting.end()) {
            throw ContractError("missing retention or forgetting row at generation " + std::to_string(end));
        }
        row.retention_top += r->r_top;
        row.forgetting_top += f->f_top;
    }
    const auto n = static_cast<double>(per_seed.size());
    row.current_c /= n;
    row.retention_top /= n;
    row.forgetting_top /= n;
    return row;
}

std::vector<SweepRow> sweep_lambda(const ExperimentConfig& cfg, std::span<const double> lambdas, const fs::path& root)
{
    if (lambdas.empty()) {
        throw ConfigError("lambdas: at least one value is required");
    }
    CsvTable table{{"lambda", "current_c", "retention_top", "forgetting_top"}, {}};
    std::vector<SweepRow> rows;
    for (double lambda : lambdas) {
        if (!(lambda >= 0.0)) {
            throw ConfigError("lambdas: values must be non-negative");
        }
        ExperimentConfig c = cfg;
        c.regularization = true;
        c.lambda = lambda;
        c.lambda_per_seed.clear();
        const fs::path dir = root / ("lambda_" + format_double(lambda));
        run_experiment(c, dir);
        std::vector<evolve::LifelongMetrics> metrics;
        for (std::uint64_t seed : c.seeds) {
            metrics.push_back(evolve::read_metrics(dir / ("seed_" + std::to_string(seed))));
        }
        rows.push_back(sweep_row(lambda, metrics, c));
        const auto& r = rows.back();
        table.rows.push_back({format_double(r.lambda), format_double(r.current_c), format_double(r.retention_top),
                              format_double(r.forgetting_top)});
    }
    fs::create_directories(root);
    write_csv(root / "sweep.csv", table);
    return rows;
}

int resolve_task(const ExperimentConfig& cfg, std::string_view text)
{
    for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
        if (cfg.tasks[i].target == text) {
            return static_cast<int>(i);
        }
    }
    long long id = -1;
    try {
        id = parse_int(text);
    } catch (const FormatError&) {
        throw ConfigError("task: '" + std::string(text) + "' is neither a task id nor a target colour");
    }
    if (id < 0 || static_cast<std::size_t>(id) >= cfg.tasks.size()) {
        throw ConfigError("task: id " + std::string(text) + " is out of range (0.." +
                          std::to_string(cfg.tasks.size() - 1) + ")");
    }
    return static_cast<int>(id);
}

namespace {

net::Phenotype controller_for(const neat::Genome& genome, const ExperimentConfig& cfg, const arena::TaskSpec& task)
{
    const std::size_t width = arena::observation_width(task.color_count(), cfg.arena.n_neighbors);
    if (genome.input_count() != width) {
        throw ConfigError("genome " + std::to_string(genome.id) + " has " + std::to_string(genome.input_count()) +
                          " inputs but task '" + task.name() + "' with " + std::to_string(task.color_count()) +
                          " colours and " + std::to_string(cfg.arena.n_neighbors) + " neighbours needs " +
                          std::to_string(width));
    }
    return net::Phenotype::decode(genome);
}

} // namespace

std::vector<TaskReport> evaluate_genome(const neat::Genome& genome, const ExperimentConfig& cfg,
                                        std::span<const int> task_ids, std::size_t n_envs, std::uint64_t seed)
{
    if (n_envs == 0) {
        throw ConfigError("n-envs: must be at least 1");
    }
    std::vector<TaskReport> out;
    for (int id : task_ids) {
        const arena::TaskSpec task = cfg.task(static_cast<std::size_t>(id));
        const net::Phenotype controller = controller_for(genome, cfg, task);
        TaskReport report{id, task.name(), {}, 0.0};
        double total = 0.0;
        for (std::uint64_t s : evolve::report_seeds(seed, n_envs)) {
            const auto r = static_cast<double>(evolve::run_episode(controller, cfg.arena, task, s).reward);
            report.episodes.push_back(r);
            total += r;
        }
        report.mean = total / static_cast<double>(n_envs);
        out.push_back(std::move(report));
    }
    return out;
}

ReplayResult replay_genome(const neat::Genome& genome, const ExperimentConfig& cfg, int task_id, std::uint64_t seed,
                           const fs::path& out_dir, bool frames)
{
    const arena::TaskSpec task = cfg.task(static_cast<std::size_t>(task_id));
    const net::Phenotype controller = controller_for(genome, cfg, task);
    std::error_code ec;
    fs::create_directories(out_dir / (frames ? "frames" : ""), ec);
    if (ec) {
        throw FormatError("cannot create " + out_dir.string() + ": " + ec.message());
    }
    ReplayResult result;
    const auto observer = [&](const arena::ArenaState& state, const arena::StepOutcome& outcome) {
        result.log.record(state, outcome);
        if (frames) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%04zu.svg", state.step);
            write_text(out_dir / "frames" / name, arena_frame_svg(state, cfg.arena));
            ++result.frames;
        }
    };
    const std::uint64_t episode = evolve::report_seeds(seed, 1).front();
    result.reward = evolve::run_episode(controller, cfg.arena, task, episode, observer).reward;
    result.log.save(out_dir / "trajectory.csv");
    return result;
}

} // namespace lswarm::expio
