#include "lswarm/evolve/lifelong.hpp"

#include "lswarm/arena/arena.hpp"
#include "lswarm/common/error.hpp"
#include "lswarm/common/seed.hpp"
#include "lswarm/neat/serialize.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <numeric>

namespace lswarm::evolve {

void TaskSchedule::validate() const
{
    if (stages.empty()) {
        throw ConfigError("schedule: at least one task is required");
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
        stages[i].task.validate();
        if (stages[i].task.palette != stages.front().task.palette) {
            throw ConfigError("schedule: all tasks must share one global colour set");
        }
        if (i > 0 && stages[i].task.id == stages[i - 1].task.id) {
            throw ConfigError("schedule: consecutive tasks must differ");
        }
    }
    for (const Stage& a : stages) {
        for (const Stage& b : stages) {
            if (a.task.id == b.task.id && a.task != b.task) {
                throw ConfigError("schedule: task id " + std::to_string(a.task.id) + " has two definitions");
            }
            if (a.task.id != b.task.id && (a.task.target == b.task.target || a.task.target == b.task.other ||
                                           a.task.other == b.task.target || a.task.other == b.task.other)) {
                throw ConfigError("schedule: tasks " + a.task.name() + " and " + b.task.name() + " share a colour");
            }
        }
    }
}

std::size_t TaskSchedule::total_generations() const noexcept
{
    std::size_t n = 0;
    for (const Stage& s : stages) {
        n += s.generations;
    }
    return n;
}

TaskSchedule::Position TaskSchedule::locate(std::size_t generation) const
{
    std::size_t start = 0;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (generation < start + stages[i].generations) {
            return {i, generation - start};
        }
        start += stages[i].generations;
    }
    throw ContractError("generation " + std::to_string(generation) + " is past the end of the schedule");
}

std::vector<int> TaskSchedule::previous_tasks(std::size_t stage) const
{
    std::vector<int> out;
    const int current = stages.at(stage).task.id;
    for (std::size_t i = 0; i < stage; ++i) {
        const int id = stages[i].task.id;
        if (id != current && std::find(out.begin(), out.end(), id) == out.end()) {
            out.push_back(id);
        }
    }
    return out;
}

const arena::TaskSpec& TaskSchedule::task_by_id(int id) const
{
    for (const Stage& s : stages) {
        if (s.task.id == id) {
            return s.task;
        }
    }
    throw ContractError("no task with id " + std::to_string(id));
}

void LifelongConfig::validate() const
{
    arena.validate();
    neat.validate();
    eval.validate();
    schedule.validate();
    if (regularizer.lambda < 0.0) {
        throw ConfigError("lambda: must be non-negative");
    }
}

GenerationResult evaluate_generation(const neat::Population& pop, const arena::TaskSpec& task,
                                     const RegularizerState& regularizer, const LifelongConfig& cfg)
{
    const auto seeds = training_seeds(cfg.eval, task.id, pop.generation);
    const std::vector<double> raw = evaluate_all(pop.genomes, cfg.arena, task, seeds, cfg.eval.threads);
    const auto distance = neat::DistanceConfig::from(cfg.neat);

    GenerationResult out;
    out.row.generation = pop.generation;
    out.row.task_id = task.id;
    out.row.best_fitness = raw.empty() ? 0.0 : *std::max_element(raw.begin(), raw.end());
    out.row.mean_fitness = raw.empty() ? 0.0 : std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    out.row.n_species = census_of(pop).size();
    for (std::size_t i = 0; i < pop.genomes.size(); ++i) {
        const neat::Genome& g = pop.genomes[i];
        const FitnessRecord rec{g.id, task.id, raw[i], raw[i]};
        out.raw.emplace(g.id, raw[i]);
        out.selection.emplace(g.id, regularized_fitness(rec, regularizer, g, distance));
    }
    return out;
}

neat::Population next_generation(const neat::Population& pop, const neat::FitnessTable& selection,
                                 const LifelongConfig& cfg, neat::InnovationRegistry& registry)
{
    Rng rng(derive_seed({tag(Stream::reproduce), cfg.eval.master_seed, pop.generation}));
    neat::Population next = neat::reproduce(pop, selection, cfg.neat, registry, rng);
    return neat::speciate(std::move(next), cfg.neat.compatibility_threshold, neat::DistanceConfig::from(cfg.neat));
}

LifelongRun::LifelongRun(LifelongConfig cfg) : cfg_(std::move(cfg))
{
    cfg_.validate();
    const auto& first = cfg_.schedule.stages.front().task;
    const std::size_t width = arena::observation_width(first.color_count(), cfg_.arena.n_neighbors);
    pop_ = neat::initial_population(cfg_.eval.master_seed, width, cfg_.neat.pop_size, cfg_.neat, registry_);
    regularizer_.enabled = cfg_.regularizer.enabled;
    regularizer_.lambda = cfg_.regularizer.lambda;
}

namespace {

// Champion of the current task: highest raw fitness, lowest id on ties.
std::size_t champion_index(const neat::Population& pop, const neat::FitnessTable& raw)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.genomes.size(); ++i) {
        const double f = raw.at(pop.genomes[i].id);
        const double b = raw.at(pop.genomes[best].id);
        if (f > b || (f == b && pop.genomes[i].id < pop.genomes[best].id)) {
            best = i;
        }
    }
    return best;
}

void save_population(const std::filesystem::path& dir, const neat::Population& pop, const neat::FitnessTable& raw,
                     int task_id)
{
    std::filesystem::create_directories(dir);
    for (const auto& g : pop.genomes) {
        neat::save_genome(dir / (std::to_string(g.id) + ".genome"), g,
                          {pop.generation, task_id, raw.at(g.id)});
    }
}

} // namespace

void LifelongRun::step()
{
    if (finished()) {
        throw ContractError("lifelong run already finished");
    }
    const std::size_t g = generation_;
    const auto where = cfg_.schedule.locate(g);
    const Stage& stage = cfg_.schedule.stages[where.stage];
    const arena::TaskSpec& task = stage.task;
    const bool last = where.last_of_stage(cfg_.schedule);
    const auto distance = neat::DistanceConfig::from(cfg_.neat);

    const auto census = census_of(pop_);
    auto [created, extinct] = tracker_.observe(g, census);
    CensusRow crow{g, {}, {}, std::move(created), std::move(extinct)};
    for (const auto& [id, size] : census) {
        crow.alive.push_back(id);
        crow.sizes.push_back(size);
    }
    metrics_.census.push_back(std::move(crow));

    GenerationResult gen = evaluate_generation(pop_, task, regularizer_, cfg_);
    metrics_.fitness.push_back(gen.row);

    if (regularizer_.reference) {
        double sum = 0.0;
        for (const auto& genome : pop_.genomes) {
            sum += neat::genetic_distance(*regularizer_.reference, genome, distance);
        }
        metrics_.reference.push_back({g, sum / static_cast<double>(pop_.genomes.size())});
    }

    const std::vector<int> previous = cfg_.schedule.previous_tasks(where.stage);
    if (!previous.empty() && (g % cfg_.eval.retention_cadence == 0 || last)) {
        const std::size_t champion = champion_index(pop_, gen.raw);
        for (int prev : previous) {
            const auto seeds = retention_seeds(cfg_.eval, prev, g);
            const auto scores = evaluate_all(pop_.genomes, cfg_.arena, cfg_.schedule.task_by_id(prev), seeds,
                                             cfg_.eval.threads);
            const double r_pop = *std::max_element(scores.begin(), scores.end());
            const double r_top = scores[champion];
            if (r_pop < r_top) {
                throw ContractError("retention: population maximum below champion score");
            }
            metrics_.retention.push_back({g, prev, r_pop, r_top});
            if (last) {
                const double before = stage_best_.at(prev);
                metrics_.forgetting.push_back({g, prev, forgetting(before, r_pop), forgetting(before, r_top)});
            }
        }
    }

    if (last) {
        stage_best_[task.id] = gen.row.best_fitness;
        stage_final_.push_back(pop_);
        stage_fitness_.push_back(gen.raw);
        if (cfg_.output_dir) {
            save_population(*cfg_.output_dir / "stages" /
                                ("stage_" + std::to_string(where.stage) + "_task_" + std::to_string(task.id)),
                            pop_, gen.raw, task.id);
        }
        if (regularizer_.enabled && where.stage + 1 < cfg_.schedule.stages.size()) {
            // First drift: best raw fitness. Later drifts: best regularized fitness.
            const auto& table = where.stage == 0 ? gen.raw : gen.selection;
            regularizer_.reference = select_reference(pop_.genomes, table);
            spdlog::debug("generation {}: reference genome {}", g, regularizer_.reference->id);
        }
    }

    ++generation_;
    if (!finished()) {
        pop_ = next_generation(pop_, gen.selection, cfg_, registry_);
    }
    metrics_.species = tracker_.lifespans();

    if (cfg_.output_dir && !finished()) {
        const bool boundary = cfg_.schedule.locate(generation_).local == 0;
        const bool periodic = cfg_.checkpoint_interval > 0 && generation_ % cfg_.checkpoint_interval == 0;
        if (boundary || periodic) {
            save_checkpoint(*cfg_.output_dir / "checkpoints" / ("gen_" + std::to_string(generation_)));
        }
    }
}

void LifelongRun::run_until(std::size_t generation)
{
    while (!finished() && generation_ < generation) {
        step();
    }
}

void LifelongRun::run()
{
    while (!finished()) {
        step();
    }
}

LifelongResult run_lifelong(const LifelongConfig& cfg)
{
    LifelongRun run(cfg);
    run.run();
    return {run.metrics(), run.stage_populations(), run.regularizer().reference};
}

} // namespace lswarm::evolve
