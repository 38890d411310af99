#pragma once

#include "lswarm/arena/trajectory.hpp"
#include "lswarm/evolve/metrics.hpp"
#include "lswarm/expio/config.hpp"
#include "lswarm/neat/genome.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lswarm::expio {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Environment variable that replaces the configured output directory.
inline constexpr const char* kOutputRootEnv = "LSWARM_OUTPUT_ROOT";

struct RunRecord {
    std::uint64_t seed = 0;
    std::string run_id; // also the directory name under the output root
    double lambda = 0.0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RunManifest {
    std::string config_hash;
    std::string tool_version{kToolVersion};
    std::vector<RunRecord> runs;
    std::string aggregate_dir = "aggregate";
    std::vector<std::string> artifacts; // paths relative to the output root

    friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

std::filesystem::path output_root(const ExperimentConfig& cfg);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Metric CSVs plus species_count.csv and the SVG plots of one run.
void write_run_outputs(const std::filesystem::path& dir, const evolve::LifelongMetrics& metrics,
                       const ExperimentConfig& cfg);

/// Seed-averaged CSVs and plots from per-seed run directories.
void aggregate_runs(std::span<const std::filesystem::path> run_dirs, const std::filesystem::path& out_dir,
                    const ExperimentConfig& cfg);

/// One lifelong run per configured seed under `root`, then the aggregate,
/// the canonical config and manifest.json.
RunManifest run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& root);

/// Comparison row measured at the end of the second stage: the current
/// task's best fitness, and R^top and F^top of the first stage's task.
struct SweepRow {
    double lambda = 0.0;
    double current_c = 0.0;
    double retention_top = 0.0;
    double forgetting_top = 0.0;

    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

SweepRow sweep_row(double lambda, std::span<const evolve::LifelongMetrics> per_seed, const ExperimentConfig& cfg);

/// One regularized experiment per lambda (per-seed lambdas are ignored),
/// each under root/lambda_<value>; writes root/sweep.csv.
std::vector<SweepRow> sweep_lambda(const ExperimentConfig& cfg, std::span<const double> lambdas,
                                   const std::filesystem::path& root);

/// Task given by numeric id or by target colour name.
int resolve_task(const ExperimentConfig& cfg, std::string_view text);

struct TaskReport {
    int task_id = 0;
    std::string name;
    std::vector<double> episodes;
    double mean = 0.0;
};

/// Fitness of a saved controller on fresh environments derived from
/// `seed`. Throws ConfigError if the genome's input width does not match.
std::vector<TaskReport> evaluate_genome(const neat::Genome& genome, const ExperimentConfig& cfg,
                                        std::span<const int> task_ids, std::size_t n_envs, std::uint64_t seed);

struct ReplayResult {
    arena::TrajectoryLog log;
    long long reward = 0;
    std::size_t frames = 0;
};

/// Runs one episode (the first environment evaluate_genome would use for
/// `seed`), writing trajectory.csv and, if `frames`, frames/frame_NNNN.svg.
ReplayResult replay_genome(const neat::Genome& genome, const ExperimentConfig& cfg, int task_id, std::uint64_t seed,
                           const std::filesystem::path& out_dir, bool frames = true);

} // namespace lswarm::expio
