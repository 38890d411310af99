#include "helpers.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"
#include "lswarm/evolve/evaluation.hpp"
#include "lswarm/expio/config.hpp"
#include "lswarm/expio/plot.hpp"
#include "lswarm/expio/runner.hpp"
#include "lswarm/expio/table.hpp"
#include "lswarm/neat/serialize.hpp"
#include "lswarm/net/phenotype.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>

namespace {

using namespace lswarm;
using namespace lswarm::expio;
using lswarm::testing::slurp;
using lswarm::testing::TempDir;
namespace fs = std::filesystem;

const fs::path kSource{LSWARM_SOURCE_DIR};

ExperimentConfig tiny_experiment()
{
    ExperimentConfig c;
    c.arena.n_agents = 2;
    c.arena.n_boxes = 6;
    c.arena.duration = 40;
    c.neat.pop_size = 12;
    c.generations_per_task = 3;
    c.n_eval_envs = 2;
    c.retention_eval_cadence = 2;
    c.seeds = {1, 2, 3};
    return c;
}

std::string expect_config_error(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    ADD_FAILURE() << "no ConfigError for: " << text;
    return {};
}

TEST(Config, DefaultsMatchReferenceTable)
{
    const ExperimentConfig c;
    const neat::NeatConfig& n = c.neat;
    EXPECT_EQ(n.num_hidden, 1u);
    EXPECT_EQ(n.initial_connection_fraction, 0.5);
    EXPECT_TRUE(n.feed_forward);
    EXPECT_EQ(n.compatibility_disjoint_coefficient, 1.0);
    EXPECT_EQ(n.compatibility_weight_coefficient, 0.6);
    EXPECT_EQ(n.conn_add_prob, 0.2);
    EXPECT_EQ(n.conn_delete_prob, 0.2);
    EXPECT_EQ(n.node_add_prob, 0.2);
    EXPECT_EQ(n.node_delete_prob, 0.2);
    EXPECT_EQ(n.activation_mutate_rate, 0.0);
    EXPECT_EQ(n.bias_init_mean, 0.0);
    EXPECT_EQ(n.bias_init_stdev, 1.0);
    EXPECT_EQ(n.bias_replace_rate, 0.1);
    EXPECT_EQ(n.bias_mutate_rate, 0.7);
    EXPECT_EQ(n.bias_mutate_power, 0.5);
    EXPECT_EQ(n.bias_max_value, 5.0);
    EXPECT_EQ(n.bias_min_value, -5.0);
    EXPECT_EQ(n.response_init_mean, 1.0);
    EXPECT_EQ(n.response_init_stdev, 0.0);
    EXPECT_EQ(n.response_replace_rate, 0.0);
    EXPECT_EQ(n.response_mutate_rate, 0.0);
    EXPECT_EQ(n.response_mutate_power, 0.0);
    EXPECT_EQ(n.response_max_value, 5.0);
    EXPECT_EQ(n.response_min_value, -5.0);
    EXPECT_EQ(n.weight_max_value, 5.0);
    EXPECT_EQ(n.weight_min_value, -5.0);
    EXPECT_EQ(n.weight_init_mean, 0.0);
    EXPECT_EQ(n.weight_init_stdev, 1.0);
    EXPECT_EQ(n.weight_mutate_rate, 0.8);
    EXPECT_EQ(n.weight_replace_rate, 0.1);
    EXPECT_EQ(n.weight_mutate_power, 1.0);
    EXPECT_TRUE(n.enabled_default);
    EXPECT_EQ(n.enabled_mutate_rate, 0.01);
    EXPECT_EQ(n.compatibility_threshold, 3.0);
    EXPECT_EQ(n.max_stagnation, 20u);
    EXPECT_EQ(n.species_elitism, 1u);
    EXPECT_EQ(n.elitism, 5u);
    EXPECT_EQ(n.survival_threshold, 0.2);
    EXPECT_EQ(c.n_eval_envs, 10u);
    EXPECT_EQ(c.generations_per_task, 200u);
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{13, 17, 24, 31, 42}));
}

TEST(Config, CanonicalRoundTrip)
{
    ExperimentConfig c = tiny_experiment();
    c.regularization = true;
    c.lambda = 0.1 + 0.2;
    c.lambda_per_seed = {{13, 5.0}, {42, 11.0}};
    c.neat.initial_connection_fraction = 1.0 / 3.0;
    c.arena.see_other_agents = true;
    const std::string text = to_canonical_text(c);
    const ExperimentConfig back = parse_config(text);
    EXPECT_EQ(back, c);
    EXPECT_EQ(to_canonical_text(back), text);
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_EQ(parse_config(to_canonical_text(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, ShippedConfigsParseAndRoundTrip)
{
    for (const char* name : {"three_task.cfg", "three_task_regularized.cfg", "four_task.cfg", "desk.cfg"}) {
        const ExperimentConfig c = load_config(kSource / "configs" / name);
        EXPECT_EQ(parse_config(to_canonical_text(c)), c) << name;
    }
    const ExperimentConfig three = load_config(kSource / "configs" / "three_task.cfg");
    EXPECT_EQ(three.schedule, (std::vector<std::string>{"red", "green", "red"}));
    EXPECT_EQ(three.neat, neat::NeatConfig{});
    const ExperimentConfig reg = load_config(kSource / "configs" / "three_task_regularized.cfg");
    EXPECT_EQ(reg.lambda_for(13), 5.0);
    EXPECT_EQ(reg.lambda_for(24), 5.0);
    EXPECT_EQ(reg.lambda_for(42), 11.0);
    EXPECT_EQ(reg.lambda_for(99), 11.0);
    const ExperimentConfig four = load_config(kSource / "configs" / "four_task.cfg");
    EXPECT_EQ(four.task(0).color_count(), 8u);
    EXPECT_EQ(arena::observation_width(four.task(0).color_count(), four.arena.n_neighbors), 61u);
}

TEST(Config, ReferenceTableKeysParseVerbatim)
{
    const ExperimentConfig c = parse_config(R"(
[neat]
num_hidden                        = 1
initial_connection                = partial_direct 0.5
feed_forward                      = True
compatibility_disjoint_coefficient = 1.0
compatibility_weight_coefficient  = 0.6
activation_default                = neat_sigmoid
activation_options                = neat_sigmoid
species_fitness_func              = max
weight_max_value                  = 5
enabled_default                   = True
)");
    EXPECT_EQ(c.neat, neat::NeatConfig{});
    EXPECT_EQ(parse_config("[neat]\ninitial_connection = full_direct\n").neat.initial_connection_fraction, 1.0);
}

TEST(Config, ErrorsNameTheKey)
{
    EXPECT_NE(expect_config_error("[neat]\ncompatibility_threshold = -1\n").find("compatibility_threshold"),
              std::string::npos);
    EXPECT_NE(expect_config_error("[neat]\npop_size = many\n").find("pop_size"), std::string::npos);
    EXPECT_NE(expect_config_error("[neat]\nno_such_key = 1\n").find("no_such_key"), std::string::npos);
    EXPECT_NE(expect_config_error("[arena]\npop_size = 10\n").find("pop_size"), std::string::npos);
    EXPECT_NE(expect_config_error("[neat]\nelitism = 1\nelitism = 2\n").find("elitism"), std::string::npos);
    EXPECT_NE(expect_config_error("[neat]\nactivation_default = tanh\n").find("activation_default"),
              std::string::npos);
    EXPECT_NE(expect_config_error("[experiment]\nschedule = red, red\n").find("schedule"), std::string::npos);
    EXPECT_NE(expect_config_error("[experiment]\nschedule = red, purple\n").find("schedule"), std::string::npos);
    EXPECT_NE(expect_config_error("[experiment]\nseeds =\n").find("seeds"), std::string::npos);
}

TEST(Config, OverridesApplyAndValidate)
{
    ExperimentConfig c;
    apply_override(c, "pop_size=40");
    apply_override(c, "lambda = 2.5");
    apply_override(c, "schedule=green,red");
    EXPECT_EQ(c.neat.pop_size, 40u);
    EXPECT_EQ(c.lambda, 2.5);
    EXPECT_EQ(c.schedule, (std::vector<std::string>{"green", "red"}));
    EXPECT_THROW(apply_override(c, "pop_size"), ConfigError);
    const ExperimentConfig before = c;
    EXPECT_THROW(apply_override(c, "survival_threshold=2"), ConfigError);
    EXPECT_EQ(c, before);
    const auto hash = config_hash(c);
    apply_override(c, "elitism=6");
    EXPECT_NE(config_hash(c), hash);
}

TEST(Config, HashIsPinned)
{
    // Canonical text is platform independent, so the hash of the defaults is a constant.
    const std::string h = config_hash_hex(ExperimentConfig{});
    EXPECT_EQ(h.size(), 16u);
    EXPECT_EQ(h, config_hash_hex(parse_config("")));
    EXPECT_EQ(h, config_hash_hex(parse_config("# comment only\n\n[neat]\npop_size = 300\n")));
}

TEST(Config, RunConfigCarriesSeedAndLambda)
{
    ExperimentConfig c = load_config(kSource / "configs" / "three_task_regularized.cfg");
    const auto rc = c.run_config(31);
    EXPECT_EQ(rc.eval.master_seed, 31u);
    EXPECT_TRUE(rc.regularizer.enabled);
    EXPECT_EQ(rc.regularizer.lambda, 11.0);
    ASSERT_EQ(rc.schedule.stages.size(), 3u);
    EXPECT_EQ(rc.schedule.stages[2].task, rc.schedule.stages[0].task);
    EXPECT_FALSE(rc.output_dir.has_value());
}

TEST(Table, MeanTableIsExactMean)
{
    std::vector<CsvTable> t(3);
    const std::vector<std::vector<double>> v{{0.1, 0.7, 1e-9}, {0.2, -3.25, 2.0}, {0.3, 11.0, 1.0 / 3.0}};
    for (std::size_t k = 0; k < 3; ++k) {
        t[k].header = {"generation", "x"};
        for (std::size_t r = 0; r < 3; ++r) {
            t[k].rows.push_back({std::to_string(r), format_double(v[k][r])});
        }
    }
    const std::vector<std::string> keys{"generation"};
    const CsvTable m = mean_table(t, keys);
    const auto xs = m.numbers("x");
    for (std::size_t r = 0; r < 3; ++r) {
        EXPECT_EQ(xs[r], (v[0][r] + v[1][r] + v[2][r]) / 3.0);
        EXPECT_EQ(m.rows[r][0], std::to_string(r));
    }
    t[1].rows[2][0] = "7";
    EXPECT_THROW(mean_table(t, keys), FormatError);
}

TEST(Experiment, SeedDirectoriesAggregateAndManifest)
{
    TempDir dir;
    const ExperimentConfig c = tiny_experiment();
    const RunManifest m = run_experiment(c, dir.path());
    ASSERT_EQ(m.runs.size(), 3u);
    EXPECT_EQ(m.config_hash, config_hash_hex(c));
    EXPECT_EQ(read_manifest(dir.path() / "manifest.json"), m);
    for (const auto& r : m.runs) {
        EXPECT_TRUE(fs::is_directory(dir.path() / r.run_id));
        EXPECT_EQ(r.run_id, "seed_" + std::to_string(r.seed));
    }
    for (const char* f : {"aggregate/fitness.csv", "aggregate/retention.csv", "aggregate/plots/fitness.svg",
                          "seed_1/species.csv", "seed_1/plots/species_lifespan.svg", "config.cfg"}) {
        EXPECT_TRUE(fs::exists(dir.path() / f)) << f;
        EXPECT_NE(std::find(m.artifacts.begin(), m.artifacts.end(), f), m.artifacts.end()) << f;
    }
    EXPECT_EQ(slurp(dir.path() / "seed_1" / "fitness.csv").substr(0, 49),
              "generation,task_id,best_fitness,mean_fitness,n_sp");
    EXPECT_EQ(load_config(dir.path() / "config.cfg"), c);

    // Aggregate spot check against a recomputation from the seed tables.
    const CsvTable agg = read_csv(dir.path() / "aggregate" / "fitness.csv");
    std::vector<std::vector<double>> per_seed;
    for (const auto& r : m.runs) {
        per_seed.push_back(read_csv(dir.path() / r.run_id / "fitness.csv").numbers("best_fitness"));
    }
    const auto best = agg.numbers("best_fitness");
    ASSERT_EQ(best.size(), 6u);
    for (std::size_t g = 0; g < best.size(); ++g) {
        EXPECT_EQ(best[g], (per_seed[0][g] + per_seed[1][g] + per_seed[2][g]) / 3.0);
    }
}

TEST(Experiment, RerunIsByteIdentical)
{
    TempDir a;
    TempDir b;
    ExperimentConfig c = tiny_experiment();
    c.seeds = {4};
    run_experiment(c, a.path());
    run_experiment(c, b.path());
    for (const char* f : {"fitness.csv", "retention.csv", "forgetting.csv", "species.csv", "census.csv"}) {
        EXPECT_EQ(slurp(a.path() / "seed_4" / f), slurp(b.path() / "seed_4" / f)) << f;
    }
    EXPECT_EQ(slurp(a.path() / "manifest.json"), slurp(b.path() / "manifest.json"));
}

TEST(Experiment, ZeroGenerationsGiveEmptyTables)
{
    TempDir dir;
    ExperimentConfig c = tiny_experiment();
    c.generations_per_task = 0;
    c.seeds = {1};
    run_experiment(c, dir.path());
    EXPECT_TRUE(read_csv(dir.path() / "seed_1" / "fitness.csv").rows.empty());
    EXPECT_TRUE(read_csv(dir.path() / "aggregate" / "fitness.csv").rows.empty());
}

TEST(Experiment, OutputRootFromEnvironment)
{
    ExperimentConfig c;
    c.output_dir = "configured";
    ::unsetenv(kOutputRootEnv);
    EXPECT_EQ(output_root(c), fs::path("configured"));
    ::setenv(kOutputRootEnv, "/tmp/elsewhere", 1);
    EXPECT_EQ(output_root(c), fs::path("/tmp/elsewhere"));
    ::unsetenv(kOutputRootEnv);
}

TEST(Sweep, ZeroLambdaRowEqualsBaseline)
{
    ExperimentConfig c = tiny_experiment();
    c.seeds = {5, 6};
    std::vector<evolve::LifelongMetrics> base;
    std::vector<evolve::LifelongMetrics> zero;
    for (auto seed : c.seeds) {
        auto rc = c.run_config(seed);
        base.push_back(evolve::run_lifelong(rc).metrics);
        rc.regularizer = {true, 0.0};
        zero.push_back(evolve::run_lifelong(rc).metrics);
    }
    EXPECT_EQ(sweep_row(0.0, base, c), sweep_row(0.0, zero, c));
    const SweepRow row = sweep_row(0.0, base, c);
    EXPECT_EQ(row.current_c, (base[0].fitness[5].best_fitness + base[1].fitness[5].best_fitness) / 2.0);
}

TEST(Sweep, WritesTableAndRejectsEmptyList)
{
    TempDir dir;
    ExperimentConfig c = tiny_experiment();
    c.seeds = {7};
    c.lambda_per_seed = {{7, 99.0}};
    const std::vector<double> lambdas{0.0, 2.0};
    const auto rows = sweep_lambda(c, lambdas, dir.path());
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[1].lambda, 2.0);
    const CsvTable t = read_csv(dir.path() / "sweep.csv");
    EXPECT_EQ(t.header, (std::vector<std::string>{"lambda", "current_c", "retention_top", "forgetting_top"}));
    EXPECT_EQ(t.rows.size(), 2u);
    EXPECT_TRUE(fs::exists(dir.path() / "lambda_2" / "manifest.json"));
    const auto m = read_manifest(dir.path() / "lambda_2" / "manifest.json");
    EXPECT_EQ(m.runs.at(0).lambda, 2.0);
    EXPECT_THROW(sweep_lambda(c, std::vector<double>{}, dir.path()), ConfigError);
}

neat::Genome some_genome(std::size_t width, std::uint64_t seed)
{
    neat::InnovationRegistry reg;
    Rng rng(seed);
    neat::NeatConfig cfg;
    cfg.initial_connection_fraction = 1.0;
    return neat::initial_genome(0, width, cfg, reg, rng);
}

TEST(Eval, SingleEnvironmentMeanIsTheEpisode)
{
    ExperimentConfig c;
    c.arena.duration = 150;
    const neat::Genome g = some_genome(41, 3);
    const std::vector<int> ids{0, 1};
    const auto rep = evaluate_genome(g, c, ids, 1, 11);
    ASSERT_EQ(rep.size(), 2u);
    const auto episode = evolve::run_episode(net::Phenotype::decode(g), c.arena, c.task(0), evolve::report_seeds(11, 1)[0]);
    ASSERT_EQ(rep[0].episodes.size(), 1u);
    EXPECT_EQ(rep[0].mean, static_cast<double>(episode.reward));
    EXPECT_EQ(rep[0].name, "red");
    EXPECT_EQ(rep[1].name, "green");
    const auto again = evaluate_genome(g, c, ids, 1, 11);
    EXPECT_EQ(again[1].episodes, rep[1].episodes);
}

TEST(Eval, WidthMismatchNamesBothWidths)
{
    ExperimentConfig c;
    const neat::Genome g = some_genome(61, 1);
    const std::vector<int> ids{0};
    try {
        evaluate_genome(g, c, ids, 1, 1);
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("61"), std::string::npos) << msg;
        EXPECT_NE(msg.find("41"), std::string::npos) << msg;
    }
}

TEST(Eval, ResolveTaskByNameOrId)
{
    const ExperimentConfig c;
    EXPECT_EQ(resolve_task(c, "green"), 1);
    EXPECT_EQ(resolve_task(c, "0"), 0);
    EXPECT_THROW(resolve_task(c, "purple"), ConfigError);
    EXPECT_THROW(resolve_task(c, "7"), ConfigError);
}

TEST(Replay, LogMatchesEpisodeAndRecountsReward)
{
    TempDir dir;
    ExperimentConfig c;
    const neat::Genome g = some_genome(41, 8);
    const ReplayResult r = replay_genome(g, c, 0, 21, dir.path(), false);
    // One record per agent per step over the full episode.
    EXPECT_EQ(r.log.records().size(), 500u * c.arena.n_agents);
    EXPECT_EQ(r.log.records().back().step, 500u);
    long long recount = 0;
    for (const auto& rec : r.log.records()) {
        if (rec.event == "none") {
            continue;
        }
        recount += arena::reward_of(arena::parse_event_kind(rec.event));
    }
    EXPECT_EQ(recount, r.reward);
    const auto rep = evaluate_genome(g, c, std::vector<int>{0}, 1, 21);
    EXPECT_EQ(static_cast<double>(r.reward), rep[0].mean);
    EXPECT_EQ(arena::TrajectoryLog::load(dir.path() / "trajectory.csv").records(), r.log.records());
    EXPECT_FALSE(fs::exists(dir.path() / "frames"));
}

TEST(Replay, IdleControllerStaysPutAndFramesPerStep)
{
    TempDir dir;
    ExperimentConfig c;
    c.arena.duration = 12;
    neat::Genome idle;
    for (std::size_t i = 0; i < 41; ++i) {
        idle.nodes.emplace(neat::input_node_id(i), neat::NodeGene{neat::input_node_id(i), neat::NodeKind::input, 0.0});
    }
    for (std::size_t o = 0; o < 3; ++o) {
        idle.nodes.emplace(neat::output_node_id(o), neat::NodeGene{neat::output_node_id(o), neat::NodeKind::output, 0.0});
    }
    const ReplayResult r = replay_genome(idle, c, 1, 2, dir.path(), true);
    EXPECT_EQ(r.frames, 12u);
    EXPECT_TRUE(fs::exists(dir.path() / "frames" / "frame_0011.svg"));
    EXPECT_EQ(r.reward, 0);
    std::map<std::size_t, std::pair<double, double>> first;
    for (const auto& rec : r.log.records()) {
        const auto [it, fresh] = first.try_emplace(rec.agent, rec.x, rec.y);
        EXPECT_EQ(it->second.first, rec.x);
        EXPECT_EQ(it->second.second, rec.y);
    }
}

TEST(Plot, SvgDocumentsAreWellFormed)
{
    LinePlot p;
    p.title = "t";
    p.series.push_back({"a", "red", Stroke::dashed, {{0, 1}, {1, 2}}});
    const std::string svg = render_svg(p);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_EQ(svg_color("yellow"), "gold");
}

} // namespace
