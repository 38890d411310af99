#include "lswarm/evolve/evaluation.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/seed.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <thread>

namespace lswarm::evolve {

void EvalConfig::validate() const
{
    if (n_eval_envs < 1) {
        throw ConfigError("n_eval_envs: must be at least 1");
    }
    if (retention_cadence < 1) {
        throw ConfigError("retention_eval_cadence: must be at least 1");
    }
    if (threads < 1) {
        throw ConfigError("threads: must be at least 1");
    }
}

EpisodeResult run_episode(const net::Phenotype& controller, const arena::ArenaConfig& config,
                          const arena::TaskSpec& task, std::uint64_t episode_seed, const StepObserver& observer)
{
    arena::Arena world(config, task);
    std::vector<arena::Observation> obs = world.reset(episode_seed);
    std::vector<double> scratch;
    std::vector<arena::WheelSpeeds> commands(config.n_agents);
    EpisodeResult result;
    while (!world.done()) {
        for (std::size_t a = 0; a < obs.size(); ++a) {
            commands[a] = net::to_wheel_velocities(controller.activate(obs[a], scratch), config.max_wheel_velocity);
        }
        arena::StepOutcome out = world.step(commands);
        result.reward += out.reward;
        result.events.insert(result.events.end(), out.events.begin(), out.events.end());
        if (observer) {
            observer(world.state(), out);
        }
        obs = std::move(out.observations);
    }
    result.steps = world.state().step;
    return result;
}

double mean_episode_reward(const net::Phenotype& controller, const arena::ArenaConfig& config,
                           const arena::TaskSpec& task, std::span<const std::uint64_t> seeds)
{
    if (seeds.empty()) {
        throw ContractError("at least one evaluation environment is required");
    }
    double total = 0.0;
    for (std::uint64_t s : seeds) {
        total += static_cast<double>(run_episode(controller, config, task, s).reward);
    }
    return total / static_cast<double>(seeds.size());
}

std::vector<std::uint64_t> training_seeds(const EvalConfig& eval, int task_id, std::size_t generation)
{
    const std::uint64_t gen_key = eval.eval_seeds_per_generation ? generation : 0;
    std::vector<std::uint64_t> seeds;
    for (std::size_t e = 0; e < eval.n_eval_envs; ++e) {
        seeds.push_back(derive_seed({tag(Stream::training_episode), eval.master_seed,
                                     static_cast<std::uint64_t>(task_id), gen_key, e}));
    }
    return seeds;
}

std::vector<std::uint64_t> retention_seeds(const EvalConfig& eval, int task_id, std::size_t generation)
{
    const std::uint64_t bucket = generation / eval.retention_cadence;
    std::vector<std::uint64_t> seeds;
    for (std::size_t e = 0; e < eval.n_eval_envs; ++e) {
        seeds.push_back(derive_seed({tag(Stream::retention_episode), eval.master_seed,
                                     static_cast<std::uint64_t>(task_id), bucket, e}));
    }
    return seeds;
}

std::vector<std::uint64_t> report_seeds(std::uint64_t seed, std::size_t n_envs)
{
    std::vector<std::uint64_t> seeds;
    for (std::size_t e = 0; e < n_envs; ++e) {
        seeds.push_back(derive_seed({tag(Stream::eval_episode), seed, e}));
    }
    return seeds;
}

double genome_fitness(const neat::Genome& genome, const arena::ArenaConfig& config, const arena::TaskSpec& task,
                      std::span<const std::uint64_t> seeds)
{
    const std::size_t width = arena::observation_width(task.color_count(), config.n_neighbors);
    if (genome.input_count() != width) {
        spdlog::warn("genome {}: {} inputs but task {} observations have width {}", genome.id, genome.input_count(),
                     task.id, width);
        return kWorstFitness;
    }
    try {
        return mean_episode_reward(net::Phenotype::decode(genome), config, task, seeds);
    } catch (const StructuralError& e) {
        spdlog::warn("genome {} failed evaluation: {}", genome.id, e.what());
        return kWorstFitness;
    }
}

FitnessRecord evaluate_fitness(const neat::Genome& genome, const arena::ArenaConfig& config,
                               const arena::TaskSpec& task, const EvalConfig& eval, std::size_t generation)
{
    const auto seeds = training_seeds(eval, task.id, generation);
    const double f = genome_fitness(genome, config, task, seeds);
    return {genome.id, task.id, f, f};
}

std::vector<double> evaluate_all(std::span<const neat::Genome> genomes, const arena::ArenaConfig& config,
                                 const arena::TaskSpec& task, std::span<const std::uint64_t> seeds,
                                 std::size_t threads)
{
    std::vector<double> out(genomes.size(), 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < genomes.size(); i = next++) {
            out[i] = genome_fitness(genomes[i], config, task, seeds);
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(threads, genomes.size()));
    if (n == 1) {
        worker();
        return out;
    }
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n; ++t) {
            pool.emplace_back(worker);
        }
    } // joined here, before `out` is returned
    return out;
}

} // namespace lswarm::evolve
