#include "lswarm/expio/config.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace lswarm::expio {

namespace {

struct Field {
    std::string_view section;
    std::string_view name;
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

[[noreturn]] void bad_value(std::string_view key, std::string_view expected, std::string_view value)
{
    throw ConfigError(std::string(key) + ": expected " + std::string(expected) + ", got '" + std::string(value) + "'");
}

double to_real(std::string_view key, std::string_view v)
{
    try {
        return parse_double(v);
    } catch (const FormatError&) {
        bad_value(key, "a number", v);
    }
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v)
{
    long long n = 0;
    try {
        n = parse_int(v);
    } catch (const FormatError&) {
        bad_value(key, "a non-negative integer", v);
    }
    if (n < 0) {
        bad_value(key, "a non-negative integer", v);
    }
    return static_cast<std::uint64_t>(n);
}

bool to_bool(std::string_view key, std::string_view v)
{
    if (v == "true" || v == "True") {
        return true;
    }
    if (v == "false" || v == "False") {
        return false;
    }
    bad_value(key, "true or false", v);
}

std::vector<std::string_view> split_list(std::string_view v)
{
    std::vector<std::string_view> out;
    v = trim(v);
    while (!v.empty()) {
        const auto comma = v.find(',');
        out.push_back(trim(v.substr(0, comma)));
        if (comma == std::string_view::npos) {
            break;
        }
        v.remove_prefix(comma + 1);
    }
    return out;
}

std::pair<std::string_view, std::string_view> split_pair(std::string_view key, std::string_view item)
{
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
        bad_value(key, "a:b pairs", item);
    }
    return {trim(item.substr(0, colon)), trim(item.substr(colon + 1))};
}

template <typename Access>
Field real(std::string_view section, std::string_view name, Access access)
{
    return {section, name, [=](ExperimentConfig& c, std::string_view v) { access(c) = to_real(name, v); },
            [=](const ExperimentConfig& c) { return format_double(access(c)); }};
}

template <typename Access>
Field count(std::string_view section, std::string_view name, Access access)
{
    return {section, name,
            [=](ExperimentConfig& c, std::string_view v) {
                access(c) = static_cast<std::remove_cvref_t<decltype(access(c))>>(to_unsigned(name, v));
            },
            [=](const ExperimentConfig& c) { return std::to_string(access(c)); }};
}

template <typename Access>
Field flag(std::string_view section, std::string_view name, Access access)
{
    return {section, name, [=](ExperimentConfig& c, std::string_view v) { access(c) = to_bool(name, v); },
            [=](const ExperimentConfig& c) { return std::string(access(c) ? "true" : "false"); }};
}

/// Keys that only accept the single supported value.
Field fixed(std::string_view section, std::string_view name, std::string_view value)
{
    return {section, name,
            [=](ExperimentConfig&, std::string_view v) {
                if (v != value) {
                    bad_value(name, value, v);
                }
            },
            [=](const ExperimentConfig&) { return std::string(value); }};
}

template <typename T>
std::string join(const std::vector<T>& items)
{
    std::ostringstream out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out << (i ? ", " : "") << items[i];
    }
    return out.str();
}

const std::vector<Field>& fields()
{
    using C = ExperimentConfig;
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        constexpr std::string_view A = "arena";
        f.push_back(real(A, "size", [](auto& c) -> auto& { return c.arena.size; }));
        f.push_back(count(A, "n_agents", [](auto& c) -> auto& { return c.arena.n_agents; }));
        f.push_back(count(A, "n_boxes", [](auto& c) -> auto& { return c.arena.n_boxes; }));
        f.push_back(count(A, "n_neighbors", [](auto& c) -> auto& { return c.arena.n_neighbors; }));
        f.push_back(real(A, "sensor_range", [](auto& c) -> auto& { return c.arena.sensor_range; }));
        f.push_back(real(A, "max_wheel_velocity", [](auto& c) -> auto& { return c.arena.max_wheel_velocity; }));
        f.push_back(real(A, "sensitivity", [](auto& c) -> auto& { return c.arena.sensitivity; }));
        f.push_back(real(A, "time_step", [](auto& c) -> auto& { return c.arena.time_step; }));
        f.push_back(count(A, "duration", [](auto& c) -> auto& { return c.arena.duration; }));
        f.push_back(count(A, "max_retrieves", [](auto& c) -> auto& { return c.arena.max_retrieves; }));
        f.push_back(real(A, "rate_target_block", [](auto& c) -> auto& { return c.arena.rate_target_block; }));
        f.push_back(flag(A, "repositioning", [](auto& c) -> auto& { return c.arena.repositioning; }));
        f.push_back(flag(A, "efficiency_reward", [](auto& c) -> auto& { return c.arena.efficiency_reward; }));
        f.push_back(flag(A, "see_other_agents", [](auto& c) -> auto& { return c.arena.see_other_agents; }));
        f.push_back(flag(A, "boxes_in_line", [](auto& c) -> auto& { return c.arena.boxes_in_line; }));
        f.push_back(real(A, "drop_zone_depth", [](auto& c) -> auto& { return c.arena.drop_zone_depth; }));
        f.push_back(real(A, "agent_separation", [](auto& c) -> auto& { return c.arena.agent_separation; }));
        f.push_back(real(A, "wheel_offset", [](auto& c) -> auto& { return c.arena.wheel_offset; }));
        f.push_back({A, "colors",
                     [](C& c, std::string_view v) {
                         c.colors.clear();
                         for (auto item : split_list(v)) {
                             c.colors.emplace_back(item);
                         }
                     },
                     [](const C& c) { return join(c.colors); }});

        constexpr std::string_view N = "neat";
        f.push_back(count(N, "pop_size", [](auto& c) -> auto& { return c.neat.pop_size; }));
        f.push_back(count(N, "num_hidden", [](auto& c) -> auto& { return c.neat.num_hidden; }));
        f.push_back({N, "initial_connection",
                     [](C& c, std::string_view v) {
                         if (v == "full_direct") {
                             c.neat.initial_connection_fraction = 1.0;
                         } else if (v.starts_with("partial_direct ")) {
                             c.neat.initial_connection_fraction =
                                 to_real("initial_connection", trim(v.substr(std::string_view("partial_direct").size())));
                         } else {
                             bad_value("initial_connection", "'partial_direct <fraction>' or 'full_direct'", v);
                         }
                     },
                     [](const C& c) { return "partial_direct " + format_double(c.neat.initial_connection_fraction); }});
        f.push_back(flag(N, "feed_forward", [](auto& c) -> auto& { return c.neat.feed_forward; }));
        f.push_back(real(N, "compatibility_excess_coefficient",
                         [](auto& c) -> auto& { return c.neat.compatibility_excess_coefficient; }));
        f.push_back(real(N, "compatibility_disjoint_coefficient",
                         [](auto& c) -> auto& { return c.neat.compatibility_disjoint_coefficient; }));
        f.push_back(real(N, "compatibility_weight_coefficient",
                         [](auto& c) -> auto& { return c.neat.compatibility_weight_coefficient; }));
        f.push_back(real(N, "conn_add_prob", [](auto& c) -> auto& { return c.neat.conn_add_prob; }));
        f.push_back(real(N, "conn_delete_prob", [](auto& c) -> auto& { return c.neat.conn_delete_prob; }));
        f.push_back(real(N, "node_add_prob", [](auto& c) -> auto& { return c.neat.node_add_prob; }));
        f.push_back(real(N, "node_delete_prob", [](auto& c) -> auto& { return c.neat.node_delete_prob; }));
        f.push_back(fixed(N, "activation_default", "neat_sigmoid"));
        f.push_back(fixed(N, "activation_options", "neat_sigmoid"));
        f.push_back(real(N, "activation_mutate_rate", [](auto& c) -> auto& { return c.neat.activation_mutate_rate; }));
        f.push_back(real(N, "bias_init_mean", [](auto& c) -> auto& { return c.neat.bias_init_mean; }));
        f.push_back(real(N, "bias_init_stdev", [](auto& c) -> auto& { return c.neat.bias_init_stdev; }));
        f.push_back(real(N, "bias_replace_rate", [](auto& c) -> auto& { return c.neat.bias_replace_rate; }));
        f.push_back(real(N, "bias_mutate_rate", [](auto& c) -> auto& { return c.neat.bias_mutate_rate; }));
        f.push_back(real(N, "bias_mutate_power", [](auto& c) -> auto& { return c.neat.bias_mutate_power; }));
        f.push_back(real(N, "bias_max_value", [](auto& c) -> auto& { return c.neat.bias_max_value; }));
        f.push_back(real(N, "bias_min_value", [](auto& c) -> auto& { return c.neat.bias_min_value; }));
        f.push_back(real(N, "response_init_mean", [](auto& c) -> auto& { return c.neat.response_init_mean; }));
        f.push_back(real(N, "response_init_stdev", [](auto& c) -> auto& { return c.neat.response_init_stdev; }));
        f.push_back(real(N, "response_replace_rate", [](auto& c) -> auto& { return c.neat.response_replace_rate; }));
        f.push_back(real(N, "response_mutate_rate", [](auto& c) -> auto& { return c.neat.response_mutate_rate; }));
        f.push_back(real(N, "response_mutate_power", [](auto& c) -> auto& { return c.neat.response_mutate_power; }));
        f.push_back(real(N, "response_max_value", [](auto& c) -> auto& { return c.neat.response_max_value; }));
        f.push_back(real(N, "response_min_value", [](auto& c) -> auto& { return c.neat.response_min_value; }));
        f.push_back(real(N, "weight_max_value", [](auto& c) -> auto& { return c.neat.weight_max_value; }));
        f.push_back(real(N, "weight_min_value", [](auto& c) -> auto& { return c.neat.weight_min_value; }));
        f.push_back(real(N, "weight_init_mean", [](auto& c) -> auto& { return c.neat.weight_init_mean; }));
        f.push_back(real(N, "weight_init_stdev", [](auto& c) -> auto& { return c.neat.weight_init_stdev; }));
        f.push_back(real(N, "weight_mutate_rate", [](auto& c) -> auto& { return c.neat.weight_mutate_rate; }));
        f.push_back(real(N, "weight_replace_rate", [](auto& c) -> auto& { return c.neat.weight_replace_rate; }));
        f.push_back(real(N, "weight_mutate_power", [](auto& c) -> auto& { return c.neat.weight_mutate_power; }));
        f.push_back(flag(N, "enabled_default", [](auto& c) -> auto& { return c.neat.enabled_default; }));
        f.push_back(real(N, "enabled_mutate_rate", [](auto& c) -> auto& { return c.neat.enabled_mutate_rate; }));
        f.push_back(real(N, "compatibility_threshold", [](auto& c) -> auto& { return c.neat.compatibility_threshold; }));
        f.push_back(fixed(N, "species_fitness_func", "max"));
        f.push_back(count(N, "max_stagnation", [](auto& c) -> auto& { return c.neat.max_stagnation; }));
        f.push_back(count(N, "species_elitism", [](auto& c) -> auto& { return c.neat.species_elitism; }));
        f.push_back(count(N, "elitism", [](auto& c) -> auto& { return c.neat.elitism; }));
        f.push_back(real(N, "survival_threshold", [](auto& c) -> auto& { return c.neat.survival_threshold; }));

        constexpr std::string_view E = "experiment";
        f.push_back({E, "tasks",
                     [](C& c, std::string_view v) {
                         c.tasks.clear();
                         for (auto item : split_list(v)) {
                             const auto [target, other] = split_pair("tasks", item);
                             c.tasks.push_back({std::string(target), std::string(other)});
                         }
                     },
                     [](const C& c) {
                         std::vector<std::string> items;
                         for (const auto& t : c.tasks) {
                             items.push_back(t.target + ":" + t.other);
                         }
                         return join(items);
                     }});
        f.push_back({E, "schedule",
                     [](C& c, std::string_view v) {
                         c.schedule.clear();
                         for (auto item : split_list(v)) {
                             c.schedule.emplace_back(item);
                         }
                     },
                     [](const C& c) { return join(c.schedule); }});
        f.push_back(count(E, "generations_per_task", [](auto& c) -> auto& { return c.generations_per_task; }));
        f.push_back(count(E, "n_eval_envs", [](auto& c) -> auto& { return c.n_eval_envs; }));
        f.push_back(count(E, "retention_eval_cadence", [](auto& c) -> auto& { return c.retention_eval_cadence; }));
        f.push_back(flag(E, "eval_seeds_per_generation", [](auto& c) -> auto& { return c.eval_seeds_per_generation; }));
        f.push_back(count(E, "threads", [](auto& c) -> auto& { return c.threads; }));
        f.push_back(flag(E, "regularization", [](auto& c) -> auto& { return c.regularization; }));
        f.push_back(real(E, "lambda", [](auto& c) -> auto& { return c.lambda; }));
        f.push_back({E, "lambda_per_seed",
                     [](C& c, std::string_view v) {
                         c.lambda_per_seed.clear();
                         for (auto item : split_list(v)) {
                             const auto [seed, lambda] = split_pair("lambda_per_seed", item);
                             c.lambda_per_seed[to_unsigned("lambda_per_seed", seed)] = to_real("lambda_per_seed", lambda);
                         }
                     },
                     [](const C& c) {
                         std::vector<std::string> items;
                         for (const auto& [seed, lambda] : c.lambda_per_seed) {
                             items.push_back(std::to_string(seed) + ":" + format_double(lambda));
                         }
                         return join(items);
                     }});
        f.push_back({E, "seeds",
                     [](C& c, std::string_view v) {
                         c.seeds.clear();
                         for (auto item : split_list(v)) {
                             c.seeds.push_back(to_unsigned("seeds", item));
                         }
                     },
                     [](const C& c) { return join(c.seeds); }});
        f.push_back({E, "output_dir", [](C& c, std::string_view v) { c.output_dir = std::string(v); },
                     [](const C& c) { return c.output_dir.generic_string(); }});
        f.push_back(count(E, "checkpoint_interval", [](auto& c) -> auto& { return c.checkpoint_interval; }));
        return f;
    }();
    return table;
}

const Field& field(std::string_view name)
{
    // Spelling used by the original simulator.
    if (name == "efficency_reward") {
        name = "efficiency_reward";
    }
    for (const Field& f : fields()) {
        if (f.name == name) {
            return f;
        }
    }
    throw ConfigError(std::string(name) + ": unknown key");
}

void require(bool ok, const std::string& key, const std::string& why)
{
    if (!ok) {
        throw ConfigError(key + ": " + why);
    }
}

} // namespace

void ExperimentConfig::validate() const
{
    arena.validate();
    neat.validate();
    require(!colors.empty(), "colors", "at least one colour is required");
    for (const auto& c : colors) {
        require(!c.empty() && c.find_first_of(" ,:#=") == std::string::npos, "colors",
                "colour names must be non-empty words, got '" + c + "'");
        require(std::count(colors.begin(), colors.end(), c) == 1, "colors", "duplicate colour '" + c + "'");
    }
    require(!tasks.empty(), "tasks", "at least one task is required");
    std::set<std::string> used;
    for (const auto& t : tasks) {
        for (const auto& c : {t.target, t.other}) {
            require(std::find(colors.begin(), colors.end(), c) != colors.end(), "tasks",
                    "colour '" + c + "' is not listed in colors");
            require(used.insert(c).second, "tasks", "colour '" + c + "' appears in more than one task slot");
        }
    }
    require(!schedule.empty(), "schedule", "at least one stage is required");
    for (const auto& s : schedule) {
        require(std::any_of(tasks.begin(), tasks.end(), [&](const TaskEntry& t) { return t.target == s; }),
                "schedule", "no task collects '" + s + "'");
    }
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        require(schedule[i] != schedule[i - 1], "schedule", "consecutive stages must use different tasks");
    }
    require(n_eval_envs >= 1, "n_eval_envs", "must be at least 1");
    require(retention_eval_cadence >= 1, "retention_eval_cadence", "must be at least 1");
    require(threads >= 1, "threads", "must be at least 1");
    require(lambda >= 0.0, "lambda", "must be non-negative");
    for (const auto& [seed, l] : lambda_per_seed) {
        require(l >= 0.0, "lambda_per_seed", "lambda for seed " + std::to_string(seed) + " is negative");
    }
    require(!seeds.empty(), "seeds", "at least one seed is required");
    for (auto s : seeds) {
        require(std::count(seeds.begin(), seeds.end(), s) == 1, "seeds", "duplicate seed " + std::to_string(s));
    }
    require(!output_dir.empty(), "output_dir", "must not be empty");
}

double ExperimentConfig::lambda_for(std::uint64_t seed) const
{
    const auto it = lambda_per_seed.find(seed);
    return it == lambda_per_seed.end() ? lambda : it->second;
}

arena::TaskSpec ExperimentConfig::task(std::size_t id) const
{
    const TaskEntry& t = tasks.at(id);
    return arena::make_task(static_cast<int>(id), colors, t.target, t.other);
}

arena::TaskSpec ExperimentConfig::task_by_target(std::string_view target) const
{
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].target == target) {
            return task(i);
        }
    }
    throw ConfigError("schedule: no task collects '" + std::string(target) + "'");
}

evolve::TaskSchedule ExperimentConfig::task_schedule() const
{
    evolve::TaskSchedule s;
    for (const auto& target : schedule) {
        s.stages.push_back({task_by_target(target), generations_per_task});
    }
    return s;
}

evolve::LifelongConfig ExperimentConfig::run_config(std::uint64_t seed) const
{
    evolve::LifelongConfig c;
    c.arena = arena;
    c.neat = neat;
    c.eval.n_eval_envs = n_eval_envs;
    c.eval.retention_cadence = retention_eval_cadence;
    c.eval.master_seed = seed;
    c.eval.eval_seeds_per_generation = eval_seeds_per_generation;
    c.eval.threads = threads;
    c.schedule = task_schedule();
    c.regularizer.enabled = regularization;
    c.regularizer.lambda = lambda_for(seed);
    c.checkpoint_interval = checkpoint_interval;
    return c;
}

ExperimentConfig parse_config(std::string_view text)
{
    ExperimentConfig cfg;
    std::string section;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(where + "unterminated section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section != "arena" && section != "neat" && section != "experiment") {
                throw ConfigError(where + "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        try {
            const Field& f = field(key);
            if (!section.empty() && f.section != section) {
                throw ConfigError(std::string(f.name) + ": belongs in [" + std::string(f.section) + "], not [" +
                                  section + "]");
            }
            if (!seen.insert(std::string(f.name)).second) {
                throw ConfigError(std::string(f.name) + ": set more than once");
            }
            f.set(cfg, value);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_config(text.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    }
    // Leaves cfg untouched if the result is invalid.
    ExperimentConfig next = cfg;
    field(trim(assignment.substr(0, eq))).set(next, trim(assignment.substr(eq + 1)));
    next.validate();
    cfg = std::move(next);
}

std::string to_canonical_text(const ExperimentConfig& cfg)
{
    std::string out;
    std::string_view section;
    for (const Field& f : fields()) {
        if (f.section != section) {
            section = f.section;
            out += (out.empty() ? "[" : "\n[") + std::string(section) + "]\n";
        }
        out += std::string(f.name) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_canonical_text(cfg)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash_hex(const ExperimentConfig& cfg)
{
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << config_hash(cfg);
    return out.str();
}

} // namespace lswarm::expio
