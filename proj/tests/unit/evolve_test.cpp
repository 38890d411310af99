#include "helpers.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/evolve/evaluation.hpp"
#include "lswarm/evolve/lifelong.hpp"
#include "lswarm/evolve/metrics.hpp"
#include "lswarm/evolve/regularizer.hpp"
#include "lswarm/neat/serialize.hpp"

#include <gtest/gtest.h>

#include <algorithm>

namespace {

using namespace lswarm;
using namespace lswarm::evolve;
using lswarm::testing::green_task;
using lswarm::testing::red_task;
using lswarm::testing::TempDir;
using lswarm::testing::tiny_lifelong;

// Inputs and outputs only, zero biases: every wheel command is 0.
neat::Genome idle_genome(std::size_t width)
{
    neat::Genome g;
    for (std::size_t i = 0; i < width; ++i) {
        g.nodes.emplace(neat::input_node_id(i), neat::NodeGene{neat::input_node_id(i), neat::NodeKind::input, 0.0});
    }
    for (std::size_t o = 0; o < 3; ++o) {
        g.nodes.emplace(neat::output_node_id(o), neat::NodeGene{neat::output_node_id(o), neat::NodeKind::output, 0.0});
    }
    return g;
}

TEST(Evaluation, IdleControllerScoresZero)
{
    const arena::ArenaConfig c;
    const neat::Genome g = idle_genome(41);
    EvalConfig eval;
    for (std::size_t gen = 0; gen < 5; ++gen) {
        EXPECT_EQ(evaluate_fitness(g, c, red_task(), eval, gen).raw, 0.0);
    }
}

TEST(Evaluation, ScriptedTeleportEpisodeScoresSeven)
{
    arena::ArenaConfig c;
    c.n_agents = 1;
    arena::Arena a(c, red_task());
    a.reset(42);
    const std::vector<arena::WheelSpeeds> still(1, arena::WheelSpeeds{});
    long long total = 0;
    std::vector<arena::Event> log;
    const auto run = [&](arena::Vec2 where) {
        arena::ArenaState s = a.state();
        s.agents[0].pose.position = where;
        a.set_state(s);
        const auto out = a.step(still);
        total += out.reward;
        log.insert(log.end(), out.events.begin(), out.events.end());
    };
    const auto free_target = [&] {
        for (const auto& b : a.state().boxes) {
            if (b.status == arena::BoxStatus::free && b.color == red_task().target) {
                return b.position;
            }
        }
        throw std::logic_error("no free target box");
    };
    run(free_target());
    run({10.0, 19.5});
    run(free_target());
    run({3.0, 19.9});
    run(free_target());
    // Fitness with N = 1 is the episode reward.
    EXPECT_EQ(total, 7);
    long long from_log = 0;
    int pickups = 0;
    int deliveries = 0;
    for (const auto& e : log) {
        from_log += arena::reward_of(e.kind);
        pickups += e.kind == arena::EventKind::pickup_target ? 1 : 0;
        deliveries += e.kind == arena::EventKind::delivery_target ? 1 : 0;
    }
    EXPECT_EQ(pickups, 3);
    EXPECT_EQ(deliveries, 2);
    EXPECT_EQ(from_log, 3 * 1 + 2 * 2);
}

TEST(Evaluation, IdenticalGenomesShareFitness)
{
    neat::InnovationRegistry reg;
    Rng rng(4);
    const neat::Genome g = lswarm::testing::random_genome(rng, reg, 41, 6, 0);
    neat::Genome twin = g;
    twin.id = 99;
    arena::ArenaConfig c;
    c.duration = 100;
    EvalConfig eval;
    eval.n_eval_envs = 3;
    EXPECT_EQ(evaluate_fitness(g, c, red_task(), eval, 7).raw, evaluate_fitness(twin, c, red_task(), eval, 7).raw);
}

TEST(Evaluation, WidthMismatchGetsWorstFitness)
{
    const std::vector<std::uint64_t> seeds{1};
    EXPECT_EQ(genome_fitness(idle_genome(40), arena::ArenaConfig{}, red_task(), seeds), kWorstFitness);
}

TEST(Evaluation, SeedStreams)
{
    EvalConfig e;
    e.master_seed = 5;
    const auto a = training_seeds(e, 0, 3);
    EXPECT_EQ(a.size(), 10u);
    EXPECT_EQ(a, training_seeds(e, 0, 3));
    EXPECT_NE(a, training_seeds(e, 0, 4));
    EXPECT_NE(a, training_seeds(e, 1, 3));
    EXPECT_NE(a, retention_seeds(e, 0, 3));
    std::vector<std::uint64_t> sorted = a;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(std::adjacent_find(sorted.begin(), sorted.end()), sorted.end());
    e.eval_seeds_per_generation = false;
    EXPECT_EQ(training_seeds(e, 0, 3), training_seeds(e, 0, 150));
    EXPECT_EQ(report_seeds(9, 1)[0], report_seeds(9, 4)[0]);
}

TEST(Evaluation, ThreadCountDoesNotChangeScores)
{
    neat::InnovationRegistry reg;
    Rng rng(12);
    std::vector<neat::Genome> genomes;
    for (int i = 0; i < 9; ++i) {
        genomes.push_back(lswarm::testing::random_genome(rng, reg, 41, 5, i));
    }
    arena::ArenaConfig c;
    c.duration = 80;
    const std::vector<std::uint64_t> seeds{3, 4};
    EXPECT_EQ(evaluate_all(genomes, c, red_task(), seeds, 1), evaluate_all(genomes, c, red_task(), seeds, 4));
}

TEST(Forgetting, TableArithmetic)
{
    EXPECT_NEAR(forgetting(24.54, 14.64), 9.9, 1e-12);
    EXPECT_NEAR(forgetting(24.54, 2.08), 22.46, 1e-12);
}

TEST(Regularizer, PenaltyArithmetic)
{
    neat::Genome ref;
    neat::Genome g;
    ref.connections = {{1, {1, -1, 0, 0.5, true}}, {2, {2, -2, 0, -0.5, true}}};
    g.connections = {{1, {1, -1, 0, 1.0, true}}, {3, {3, -2, 1, 0.2, true}}};
    const neat::DistanceConfig d;
    ASSERT_DOUBLE_EQ(neat::genetic_distance(ref, g, d), 1.3);
    FitnessRecord r{0, 0, 30.0, 30.0};
    RegularizerState on{true, 11.0, ref};
    EXPECT_NEAR(regularized_fitness(r, on, g, d), 15.7, 1e-12);
    EXPECT_EQ(regularized_fitness(r, on, ref, d), 30.0);
    EXPECT_EQ(regularized_fitness(r, RegularizerState{true, 0.0, ref}, g, d), 30.0);
    EXPECT_EQ(regularized_fitness(r, RegularizerState{false, 11.0, ref}, g, d), 30.0);
    EXPECT_EQ(regularized_fitness(r, RegularizerState{true, 11.0, std::nullopt}, g, d), 30.0);
}

TEST(Regularizer, ReferenceIsArgmaxWithLowestIdOnTies)
{
    std::vector<neat::Genome> genomes(4);
    for (int i = 0; i < 4; ++i) {
        genomes[static_cast<std::size_t>(i)].id = 10 - i;
    }
    EXPECT_EQ(select_reference(std::span(genomes).first(1), {{10, -3.0}}).id, 10);
    EXPECT_EQ(select_reference(genomes, {{10, 10.0}, {9, 20.0}, {8, 1.0}, {7, 0.0}}).id, 9);
    EXPECT_EQ(select_reference(genomes, {{10, 5.0}, {9, 1.0}, {8, 5.0}, {7, 5.0}}).id, 7);
    EXPECT_THROW(select_reference({}, {}), ContractError);
}

TEST(Schedule, LocateAndPreviousTasks)
{
    TaskSchedule s;
    s.stages = {{red_task(), 3}, {green_task(), 2}, {red_task(), 4}};
    ASSERT_NO_THROW(s.validate());
    EXPECT_EQ(s.total_generations(), 9u);
    EXPECT_EQ(s.locate(0).stage, 0u);
    EXPECT_EQ(s.locate(2).local, 2u);
    EXPECT_TRUE(s.locate(2).last_of_stage(s));
    EXPECT_EQ(s.locate(3).stage, 1u);
    EXPECT_EQ(s.locate(5).stage, 2u);
    EXPECT_EQ(s.locate(8).local, 3u);
    EXPECT_THROW((void)s.locate(9), ContractError);
    EXPECT_TRUE(s.previous_tasks(0).empty());
    EXPECT_EQ(s.previous_tasks(1), std::vector<int>{0});
    EXPECT_EQ(s.previous_tasks(2), std::vector<int>{1});
    EXPECT_EQ(s.task_by_id(1), green_task());

    TaskSchedule repeat;
    repeat.stages = {{red_task(), 3}, {red_task(), 3}};
    EXPECT_THROW(repeat.validate(), ConfigError);
    EXPECT_THROW(TaskSchedule{}.validate(), ConfigError);
}

TEST(Lifelong, SingleTaskHasNoRetentionOrForgetting)
{
    LifelongConfig c = tiny_lifelong(3);
    c.schedule.stages.resize(1);
    const auto r = run_lifelong(c);
    EXPECT_EQ(r.metrics.fitness.size(), 4u);
    EXPECT_TRUE(r.metrics.retention.empty());
    EXPECT_TRUE(r.metrics.forgetting.empty());
    EXPECT_TRUE(r.metrics.reference.empty());
    EXPECT_EQ(r.stage_populations.size(), 1u);
}

TEST(Lifelong, MetricsTablesAreConsistent)
{
    const LifelongConfig c = tiny_lifelong(7, 5);
    LifelongRun run(c);
    run.run();
    const auto& m = run.metrics();
    ASSERT_EQ(m.fitness.size(), 10u);
    ASSERT_EQ(m.census.size(), 10u);
    for (std::size_t g = 0; g < 10; ++g) {
        EXPECT_EQ(m.fitness[g].generation, g);
        EXPECT_EQ(m.fitness[g].task_id, g < 5 ? 0 : 1);
        EXPECT_GE(m.fitness[g].best_fitness, m.fitness[g].mean_fitness);
        // Census recount: alive species per generation, from fitness, census and lifespans.
        EXPECT_EQ(m.fitness[g].n_species, m.census[g].alive.size());
        std::size_t alive = 0;
        for (const auto& s : m.species) {
            alive += s.created_at <= g && (!s.extinct_at || *s.extinct_at > g) ? 1 : 0;
        }
        EXPECT_EQ(alive, m.census[g].alive.size()) << "generation " << g;
        std::size_t members = 0;
        for (std::size_t sz : m.census[g].sizes) {
            members += sz;
        }
        EXPECT_EQ(members, c.neat.pop_size);
    }
    // Retention at the cadence within stage two plus its last generation.
    std::vector<std::size_t> gens;
    for (const auto& r : m.retention) {
        EXPECT_EQ(r.eval_task_id, 0);
        EXPECT_GE(r.r_pop, r.r_top);
        gens.push_back(r.generation);
    }
    EXPECT_EQ(gens, (std::vector<std::size_t>{6, 8, 9}));
    ASSERT_EQ(m.forgetting.size(), 1u);
    const auto& f = m.forgetting[0];
    EXPECT_EQ(f.boundary_generation, 9u);
    EXPECT_EQ(f.f_pop, m.fitness[4].best_fitness - m.retention.back().r_pop);
    EXPECT_EQ(f.f_top, m.fitness[4].best_fitness - m.retention.back().r_top);
    EXPECT_LE(f.f_pop, f.f_top);
}

TEST(Lifelong, BestFitnessNonDecreasingOnFixedEnvironments)
{
    LifelongConfig c = tiny_lifelong(21, 8);
    c.schedule.stages.resize(1);
    c.eval.eval_seeds_per_generation = false;
    const auto r = run_lifelong(c);
    for (std::size_t g = 1; g < r.metrics.fitness.size(); ++g) {
        EXPECT_GE(r.metrics.fitness[g].best_fitness, r.metrics.fitness[g - 1].best_fitness) << g;
    }
}

TEST(Lifelong, FrozenPopulationIsAFixedPoint)
{
    LifelongConfig c = tiny_lifelong(5, 4);
    c.schedule.stages.resize(1);
    c.neat = c.neat.without_mutation();
    c.neat.elitism = c.neat.pop_size;
    c.eval.eval_seeds_per_generation = false;
    LifelongRun run(c);
    run.step();
    const auto first = run.population().genomes;
    run.run();
    const auto& m = run.metrics();
    for (const auto& row : m.fitness) {
        EXPECT_EQ(row.best_fitness, m.fitness[0].best_fitness);
        EXPECT_EQ(row.mean_fitness, m.fitness[0].mean_fitness);
    }
    for (const auto& g : first) {
        const auto* now = run.population().find(g.id);
        ASSERT_NE(now, nullptr);
        EXPECT_EQ(*now, g);
    }
}

TEST(Lifelong, ThreadCountDoesNotChangeTheRun)
{
    LifelongConfig one = tiny_lifelong(8);
    LifelongConfig many = one;
    many.eval.threads = 3;
    const auto a = run_lifelong(one);
    const auto b = run_lifelong(many);
    EXPECT_EQ(a.metrics, b.metrics);
    EXPECT_EQ(a.stage_populations, b.stage_populations);
}

TEST(Lifelong, RetentionEvaluationLeavesTrainingUntouched)
{
    LifelongConfig sparse = tiny_lifelong(9, 6);
    LifelongConfig dense = sparse;
    sparse.eval.retention_cadence = 100;
    dense.eval.retention_cadence = 1;
    const auto a = run_lifelong(sparse);
    const auto b = run_lifelong(dense);
    EXPECT_EQ(a.metrics.fitness, b.metrics.fitness);
    EXPECT_EQ(a.stage_populations, b.stage_populations);
    EXPECT_LT(a.metrics.retention.size(), b.metrics.retention.size());
}

TEST(Lifelong, ZeroLambdaMatchesDisabledRegularizer)
{
    LifelongConfig off = tiny_lifelong(10);
    LifelongConfig zero = off;
    zero.regularizer = {true, 0.0};
    const auto a = run_lifelong(off);
    const auto b = run_lifelong(zero);
    EXPECT_FALSE(a.reference.has_value());
    ASSERT_TRUE(b.reference.has_value());
    EXPECT_FALSE(b.metrics.reference.empty());
    auto stripped = b.metrics;
    stripped.reference.clear();
    EXPECT_EQ(a.metrics, stripped);
    EXPECT_EQ(a.stage_populations, b.stage_populations);
}

TEST(Lifelong, ReferenceIsStageChampionAndFrozen)
{
    LifelongConfig c = tiny_lifelong(12);
    c.regularizer = {true, 2.0};
    LifelongRun run(c);
    run.run_until(4);
    const auto& pop = run.stage_populations().at(0);
    const auto& raw = run.stage_fitness().at(0);
    const neat::Genome& expected = select_reference(pop.genomes, raw);
    ASSERT_TRUE(run.regularizer().reference.has_value());
    EXPECT_EQ(*run.regularizer().reference, expected);
    run.run();
    EXPECT_EQ(*run.regularizer().reference, expected);
    ASSERT_EQ(run.metrics().reference.size(), 4u);
    EXPECT_EQ(run.metrics().reference.front().generation, 4u);
}

TEST(Lifelong, RegularizedSelectionUsesPenalty)
{
    LifelongConfig c = tiny_lifelong(14);
    c.regularizer = {true, 3.0};
    LifelongRun run(c);
    run.run_until(4);
    const auto gen = evaluate_generation(run.population(), green_task(), run.regularizer(), c);
    const neat::DistanceConfig d = neat::DistanceConfig::from(c.neat);
    for (const auto& g : run.population().genomes) {
        const double delta = neat::genetic_distance(*run.regularizer().reference, g, d);
        EXPECT_DOUBLE_EQ(gen.selection.at(g.id), gen.raw.at(g.id) - 3.0 * delta);
    }
}

TEST(Lifelong, ResumeFromCheckpointIsIdentical)
{
    TempDir dir;
    LifelongConfig c = tiny_lifelong(15, 5);
    c.regularizer = {true, 1.5};
    c.checkpoint_interval = 3;
    LifelongConfig with_output = c;
    with_output.output_dir = dir.path();
    LifelongRun full(with_output);
    full.run();

    for (const char* cp : {"gen_3", "gen_5", "gen_6"}) {
        const auto path = dir.path() / "checkpoints" / cp;
        ASSERT_TRUE(std::filesystem::exists(path / "state.txt")) << cp;
        LifelongRun resumed = LifelongRun::resume(c, path);
        resumed.run();
        EXPECT_EQ(resumed.metrics(), full.metrics()) << cp;
        EXPECT_EQ(resumed.population(), full.population()) << cp;
        EXPECT_EQ(resumed.registry(), full.registry()) << cp;
        EXPECT_EQ(resumed.regularizer().reference, full.regularizer().reference) << cp;
    }
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "stages" / "stage_0_task_0"));
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "stages" / "stage_1_task_1"));
}

TEST(Lifelong, ResumeRejectsMismatchedConfig)
{
    TempDir dir;
    LifelongConfig c = tiny_lifelong(16, 3);
    c.output_dir = dir.path();
    LifelongRun(c).run();
    LifelongConfig other = c;
    other.output_dir.reset();
    other.eval.master_seed = 17;
    EXPECT_THROW(LifelongRun::resume(other, dir.path() / "checkpoints" / "gen_3"), ConfigError);
}

TEST(SpeciesTracker, LifespanRows)
{
    SpeciesTracker t;
    t.observe(3, {{1, 4}});
    for (std::size_t g = 4; g < 10; ++g) {
        t.observe(g, {{1, 5}, {2, 1}});
    }
    auto [created, extinct] = t.observe(10, {{2, 6}});
    EXPECT_TRUE(created.empty());
    EXPECT_EQ(extinct, std::vector<neat::SpeciesId>{1});
    const auto rows = t.lifespans();
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (SpeciesLifespan{1, 3, 10, 5}));
    EXPECT_EQ(rows[1], (SpeciesLifespan{2, 4, std::nullopt, 6}));
    EXPECT_EQ(t.alive_count(), 1u);
    EXPECT_EQ(SpeciesTracker::restore(rows).lifespans(), rows);
}

} // namespace
