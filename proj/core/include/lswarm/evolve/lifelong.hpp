#pragma once

#include "lswarm/arena/config.hpp"
#include "lswarm/evolve/evaluation.hpp"
#include "lswarm/evolve/metrics.hpp"
#include "lswarm/evolve/regularizer.hpp"
#include "lswarm/neat/config.hpp"
#include "lswarm/neat/innovation.hpp"
#include "lswarm/neat/population.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace lswarm::evolve {

struct Stage {
    arena::TaskSpec task;
    std::size_t generations = 200;
};

/// Ordered tasks with their generation budgets. A task may reappear.
struct TaskSchedule {
    std::vector<Stage> stages;

    void validate() const;
    [[nodiscard]] std::size_t total_generations() const noexcept;

    struct Position {
        std::size_t stage;
        std::size_t local; // generation index inside the stage
        [[nodiscard]] bool last_of_stage(const TaskSchedule& s) const noexcept
        {
            return local + 1 == s.stages[stage].generations;
        }
    };
    /// Stage containing global `generation`; requires generation < total_generations().
    [[nodiscard]] Position locate(std::size_t generation) const;

    /// Distinct task ids met in stages before `stage`, excluding that stage's own task, in order of first appearance.
    [[nodiscard]] std::vector<int> previous_tasks(std::size_t stage) const;
    [[nodiscard]] const arena::TaskSpec& task_by_id(int id) const;
};

struct RegularizerConfig {
    bool enabled = false;
    double lambda = 0.0;
};

struct LifelongConfig {
    arena::ArenaConfig arena;
    neat::NeatConfig neat;
    EvalConfig eval;
    TaskSchedule schedule;
    RegularizerConfig regularizer;
    /// When set, stage-final populations and resumable checkpoints are written here.
    std::optional<std::filesystem::path> output_dir;
    /// Extra checkpoints every N generations; 0 means stage boundaries only.
    std::size_t checkpoint_interval = 0;

    void validate() const;
};

struct GenerationResult {
    neat::FitnessTable raw;
    neat::FitnessTable selection; // regularized when the penalty is active
    FitnessRow row;
};

/// Evaluates every genome on `task`, derives the selection signal and
/// records C, mean fitness and the species count. Does not reproduce.
GenerationResult evaluate_generation(const neat::Population& pop, const arena::TaskSpec& task,
                                     const RegularizerState& regularizer, const LifelongConfig& cfg);

/// Next generation from an evaluated population: reproduction followed by
/// speciation, seeded from (master seed, generation).
neat::Population next_generation(const neat::Population& pop, const neat::FitnessTable& selection,
                                 const LifelongConfig& cfg, neat::InnovationRegistry& registry);

/// Lifelong evolution over a task schedule, one generation per step().
class LifelongRun {
public:
    explicit LifelongRun(LifelongConfig cfg);

    /// Continues from a checkpoint written by save_checkpoint(); the
    /// continuation is identical to an uninterrupted run with the same config.
    static LifelongRun resume(LifelongConfig cfg, const std::filesystem::path& checkpoint);

    [[nodiscard]] bool finished() const noexcept { return generation_ >= cfg_.schedule.total_generations(); }
    void step();
    void run_until(std::size_t generation);
    void run();

    void save_checkpoint(const std::filesystem::path& dir) const;

    [[nodiscard]] std::size_t generation() const noexcept { return generation_; }
    [[nodiscard]] const LifelongConfig& config() const noexcept { return cfg_; }
    [[nodiscard]] const LifelongMetrics& metrics() const noexcept { return metrics_; }
    [[nodiscard]] const neat::Population& population() const noexcept { return pop_; }
    [[nodiscard]] const RegularizerState& regularizer() const noexcept { return regularizer_; }
    [[nodiscard]] const neat::InnovationRegistry& registry() const noexcept { return registry_; }
    /// Evaluated population at the end of each completed stage.
    [[nodiscard]] const std::vector<neat::Population>& stage_populations() const noexcept { return stage_final_; }
    [[nodiscard]] const std::vector<neat::FitnessTable>& stage_fitness() const noexcept { return stage_fitness_; }

private:
    LifelongRun() = default;

    LifelongConfig cfg_;
    std::size_t generation_ = 0;
    neat::Population pop_;
    neat::InnovationRegistry registry_;
    RegularizerState regularizer_;
    LifelongMetrics metrics_;
    SpeciesTracker tracker_;
    std::map<int, double> stage_best_; // task id -> C at the end of its latest stage
    std::vector<neat::Population> stage_final_;
    std::vector<neat::FitnessTable> stage_fitness_;
};

struct LifelongResult {
    LifelongMetrics metrics;
    std::vector<neat::Population> stage_populations;
    std::optional<neat::Genome> reference;
};

LifelongResult run_lifelong(const LifelongConfig& cfg);

} // namespace lswarm::evolve
