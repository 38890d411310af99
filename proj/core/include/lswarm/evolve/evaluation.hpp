#pragma once

#include "lswarm/arena/arena.hpp"
#include "lswarm/neat/genome.hpp"
#include "lswarm/net/phenotype.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace lswarm::evolve {

struct EvalConfig {
    std::size_t n_eval_envs = 10;
    std::size_t retention_cadence = 10; // generations between retention evaluations
    std::uint64_t master_seed = 0;
    /// When false, every generation of a task reuses the same N environments.
    bool eval_seeds_per_generation = true;
    std::size_t threads = 1;

    void validate() const;
};

/// Fitness given to genomes whose controller cannot be evaluated.
inline constexpr double kWorstFitness = std::numeric_limits<double>::lowest();

struct FitnessRecord {
    neat::GenomeId genome_id = 0;
    int task_id = 0;
    double raw = 0.0;
    double regularized = 0.0;
};

struct EpisodeResult {
    long long reward = 0;
    std::size_t steps = 0;
    std::vector<arena::Event> events;
};

using StepObserver = std::function<void(const arena::ArenaState&, const arena::StepOutcome&)>;

/// One episode with every agent driven by the same controller. The swarm
/// reward is the sum of all agents' events over the episode.
EpisodeResult run_episode(const net::Phenotype& controller, const arena::ArenaConfig& config,
                          const arena::TaskSpec& task, std::uint64_t episode_seed,
                          const StepObserver& observer = {});

/// Mean episode reward over the given seeds.
double mean_episode_reward(const net::Phenotype& controller, const arena::ArenaConfig& config,
                           const arena::TaskSpec& task, std::span<const std::uint64_t> seeds);

/// The N environments shared by all genomes of a generation on `task`.
std::vector<std::uint64_t> training_seeds(const EvalConfig& eval, int task_id, std::size_t generation);

/// Environments for measuring retention on a previous task; a stream
/// independent of training, fixed per (task, generation / cadence).
std::vector<std::uint64_t> retention_seeds(const EvalConfig& eval, int task_id, std::size_t generation);

/// Independent evaluation seeds for reporting (`eval` CLI).
std::vector<std::uint64_t> report_seeds(std::uint64_t seed, std::size_t n_envs);

/// Fitness of one genome on `seeds`. Genomes whose input width does not
/// match the task, or that fail to decode, get kWorstFitness.
double genome_fitness(const neat::Genome& genome, const arena::ArenaConfig& config, const arena::TaskSpec& task,
                      std::span<const std::uint64_t> seeds);

/// Raw fitness on the generation's training environments; `regularized`
/// is initialised to the raw value.
FitnessRecord evaluate_fitness(const neat::Genome& genome, const arena::ArenaConfig& config,
                               const arena::TaskSpec& task, const EvalConfig& eval, std::size_t generation);

/// genome_fitness for every genome, spread over `threads` workers. The
/// result is indexed like `genomes` and independent of the thread count.
std::vector<double> evaluate_all(std::span<const neat::Genome> genomes, const arena::ArenaConfig& config,
                                 const arena::TaskSpec& task, std::span<const std::uint64_t> seeds,
                                 std::size_t threads);

} // namespace lswarm::evolve
