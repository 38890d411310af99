#pragma once

#include "lswarm/arena/config.hpp"
#include "lswarm/common/seed.hpp"
#include "lswarm/evolve/lifelong.hpp"
#include "lswarm/neat/config.hpp"
#include "lswarm/neat/genome.hpp"
#include "lswarm/neat/innovation.hpp"
#include "lswarm/neat/operators.hpp"

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace lswarm::testing {

inline const std::vector<std::string>& palette4()
{
    static const std::vector<std::string> p{"red", "blue", "green", "yellow"};
    return p;
}

inline arena::TaskSpec red_task() { return arena::make_task(0, palette4(), "red", "blue"); }
inline arena::TaskSpec green_task() { return arena::make_task(1, palette4(), "green", "yellow"); }

/// Mutation-heavy settings so a few steps produce varied topologies.
inline neat::NeatConfig structural_config()
{
    neat::NeatConfig c;
    c.conn_add_prob = 0.6;
    c.conn_delete_prob = 0.3;
    c.node_add_prob = 0.5;
    c.node_delete_prob = 0.2;
    c.enabled_mutate_rate = 0.2;
    return c;
}

inline neat::Genome random_genome(Rng& rng, neat::InnovationRegistry& registry, std::size_t width,
                                  std::size_t steps, neat::GenomeId id = 0)
{
    const neat::NeatConfig cfg = structural_config();
    neat::Genome g = neat::initial_genome(id, width, cfg, registry, rng);
    for (std::size_t i = 0; i < steps; ++i) {
        g = neat::mutate(std::move(g), cfg, registry, rng);
    }
    return g;
}

/// Two genomes sharing history: a common ancestor mutated independently.
inline std::pair<neat::Genome, neat::Genome> related_pair(Rng& rng, neat::InnovationRegistry& registry,
                                                          std::size_t width)
{
    std::uniform_int_distribution<std::size_t> steps(0, 12);
    const neat::NeatConfig cfg = structural_config();
    const neat::Genome ancestor = random_genome(rng, registry, width, steps(rng));
    neat::Genome a = ancestor;
    neat::Genome b = ancestor;
    b.id = 1;
    for (std::size_t i = steps(rng); i > 0; --i) {
        a = neat::mutate(std::move(a), cfg, registry, rng);
    }
    for (std::size_t i = steps(rng); i > 0; --i) {
        b = neat::mutate(std::move(b), cfg, registry, rng);
    }
    return {a, b};
}

/// Desk-sized lifelong configuration that runs in well under a second.
inline evolve::LifelongConfig tiny_lifelong(std::uint64_t seed, std::size_t generations_per_task = 4)
{
    evolve::LifelongConfig c;
    c.arena.n_agents = 2;
    c.arena.n_boxes = 6;
    c.arena.duration = 40;
    c.neat.pop_size = 16;
    c.eval.n_eval_envs = 2;
    c.eval.retention_cadence = 2;
    c.eval.master_seed = seed;
    c.schedule.stages = {{red_task(), generations_per_task}, {green_task(), generations_per_task}};
    return c;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("lswarm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace lswarm::testing
