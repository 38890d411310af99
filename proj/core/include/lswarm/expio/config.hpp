#pragma once

#include "lswarm/arena/config.hpp"
#include "lswarm/evolve/lifelong.hpp"
#include "lswarm/neat/config.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lswarm::expio {

/// Box colours present during one task; the first is collected.
struct TaskEntry {
    std::string target;
    std::string other;

    friend bool operator==(const TaskEntry&, const TaskEntry&) = default;
};

/// Everything needed to reproduce a multi-seed lifelong experiment.
///
/// Text form: `key = value` lines, `#` comments and optional `[arena]`,
/// `[neat]`, `[experiment]` section headers. Keys use the neat-python and
/// simulator parameter names, so a key must sit in its own section if
/// sections are used at all.
struct ExperimentConfig {
    arena::ArenaConfig arena;
    neat::NeatConfig neat;

    std::vector<std::string> colors{"red", "blue", "green", "yellow"};
    std::vector<TaskEntry> tasks{{"red", "blue"}, {"green", "yellow"}};
    std::vector<std::string> schedule{"red", "green"}; // task targets, in order
    std::size_t generations_per_task = 200;

    std::size_t n_eval_envs = 10;
    std::size_t retention_eval_cadence = 10;
    bool eval_seeds_per_generation = true;
    std::size_t threads = 1;

    bool regularization = false;
    double lambda = 0.0;
    std::map<std::uint64_t, double> lambda_per_seed; // overrides lambda for listed seeds

    std::vector<std::uint64_t> seeds{13, 17, 24, 31, 42};
    std::filesystem::path output_dir = "runs";
    std::size_t checkpoint_interval = 0;

    /// Throws ConfigError naming the offending key.
    void validate() const;

    [[nodiscard]] double lambda_for(std::uint64_t seed) const;
    /// Task id of each task entry is its position in `tasks`.
    [[nodiscard]] arena::TaskSpec task(std::size_t id) const;
    [[nodiscard]] arena::TaskSpec task_by_target(std::string_view target) const;
    [[nodiscard]] evolve::TaskSchedule task_schedule() const;
    /// Lifelong configuration of one seed; output_dir is left unset.
    [[nodiscard]] evolve::LifelongConfig run_config(std::uint64_t seed) const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Applies one `key=value` assignment, as given to `--set`.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

/// Every key in a fixed order with shortest round-trip numbers; parsing
/// the result gives back an equal config.
std::string to_canonical_text(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& cfg);
std::string config_hash_hex(const ExperimentConfig& cfg);

} // namespace lswarm::expio
