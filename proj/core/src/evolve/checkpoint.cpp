// Checkpoint directory layout:
//   state.txt          key=value scalars
//   registry.txt       innovation memo
//   population/        current genomes, one file each, listed in order in state.txt
//   species.txt        one species per line; representatives in species/
//   reference.genome   regularization reference, when one exists
//   stage_<i>/         evaluated population at the end of completed stage i
//   metrics/           metric CSVs accumulated so far
#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"
#include "lswarm/evolve/lifelong.hpp"
#include "lswarm/neat/serialize.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace lswarm::evolve {

namespace {

constexpr std::string_view kFormat = "lswarm-checkpoint-1";

using KeyValues = std::map<std::string, std::string>;

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot read " + path.string());
    }
    return in;
}

KeyValues read_key_values(const std::filesystem::path& path)
{
    auto in = open_in(path);
    KeyValues kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError(path.string() + ": expected key=value, got '" + std::string(text) + "'");
        }
        kv.emplace(std::string(trim(text.substr(0, eq))), std::string(trim(text.substr(eq + 1))));
    }
    return kv;
}

const std::string& require(const KeyValues& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end()) {
        throw FormatError("checkpoint state is missing '" + key + "'");
    }
    return it->second;
}

std::size_t as_size(const std::string& s) { return static_cast<std::size_t>(parse_int(s)); }

template <typename T>
std::string join_ids(const std::vector<T>& ids)
{
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += std::to_string(ids[i]);
    }
    return out;
}

std::vector<long long> split_ids(std::string_view text)
{
    std::vector<long long> out;
    while (!text.empty()) {
        const auto sep = text.find(';');
        out.push_back(parse_int(text.substr(0, sep)));
        if (sep == std::string_view::npos) {
            break;
        }
        text.remove_prefix(sep + 1);
    }
    return out;
}

std::string join_reals(const std::vector<double>& values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ';';
        }
        out += format_double(values[i]);
    }
    return out;
}

std::vector<double> split_reals(std::string_view text)
{
    std::vector<double> out;
    while (!text.empty()) {
        const auto sep = text.find(';');
        out.push_back(parse_double(text.substr(0, sep)));
        if (sep == std::string_view::npos) {
            break;
        }
        text.remove_prefix(sep + 1);
    }
    return out;
}

void write_registry(const std::filesystem::path& path, const neat::InnovationRegistry& registry)
{
    auto out = open_out(path);
    out << "next_innovation " << registry.next_innovation() << '\n';
    out << "next_node " << registry.next_node() << '\n';
    for (const auto& [key, innovation] : registry.connection_memo()) {
        out << "connection " << key.first << ' ' << key.second << ' ' << innovation << '\n';
    }
    for (const auto& [innovation, node] : registry.split_memo()) {
        out << "split " << innovation << ' ' << node << '\n';
    }
}

neat::InnovationRegistry read_registry(const std::filesystem::path& path)
{
    auto in = open_in(path);
    neat::Innovation next_innovation = 0;
    neat::NodeId next_node = 0;
    std::map<std::pair<neat::NodeId, neat::NodeId>, neat::Innovation> connections;
    std::map<neat::Innovation, neat::NodeId> splits;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string kind;
        if (!(row >> kind)) {
            continue;
        }
        bool ok = true;
        if (kind == "next_innovation") {
            ok = static_cast<bool>(row >> next_innovation);
        } else if (kind == "next_node") {
            ok = static_cast<bool>(row >> next_node);
        } else if (kind == "connection") {
            neat::NodeId s = 0;
            neat::NodeId t = 0;
            neat::Innovation i = 0;
            ok = static_cast<bool>(row >> s >> t >> i);
            connections.emplace(std::pair{s, t}, i);
        } else if (kind == "split") {
            neat::Innovation i = 0;
            neat::NodeId n = 0;
            ok = static_cast<bool>(row >> i >> n);
            splits.emplace(i, n);
        } else {
            ok = false;
        }
        if (!ok) {
            throw FormatError(path.string() + ": bad line '" + line + "'");
        }
    }
    return neat::InnovationRegistry::restore(next_innovation, next_node, std::move(connections), std::move(splits));
}

void write_genomes(const std::filesystem::path& dir, const neat::Population& pop, const neat::FitnessTable* fitness)
{
    std::filesystem::create_directories(dir);
    for (const auto& g : pop.genomes) {
        neat::GenomeMeta meta{pop.generation, std::nullopt, std::nullopt};
        if (fitness != nullptr) {
            meta.fitness = fitness->at(g.id);
        }
        neat::save_genome(dir / (std::to_string(g.id) + ".genome"), g, meta);
    }
}

std::vector<neat::Genome> read_genomes(const std::filesystem::path& dir, const std::vector<long long>& order,
                                       neat::FitnessTable* fitness)
{
    std::vector<neat::Genome> out;
    out.reserve(order.size());
    for (long long id : order) {
        auto doc = neat::load_genome(dir / (std::to_string(id) + ".genome"));
        if (doc.genome.id != id) {
            throw FormatError("genome file " + std::to_string(id) + " holds genome " + std::to_string(doc.genome.id));
        }
        if (fitness != nullptr) {
            if (!doc.meta.fitness) {
                throw FormatError("stage genome " + std::to_string(id) + " has no fitness");
            }
            fitness->emplace(id, *doc.meta.fitness);
        }
        out.push_back(std::move(doc.genome));
    }
    return out;
}

void write_species(const std::filesystem::path& dir, const neat::Population& pop)
{
    auto out = open_out(dir / "species.txt");
    out << "# id created_at extinct_at best_fitness stagnation peak_size members history\n";
    std::filesystem::create_directories(dir / "species");
    for (const auto& s : pop.species) {
        out << s.id << ' ' << s.created_at << ' ' << (s.extinct_at ? std::to_string(*s.extinct_at) : "none") << ' '
            << format_double(s.best_fitness) << ' ' << s.stagnation << ' ' << s.peak_size << ' '
            << (s.members.empty() ? "-" : join_ids(s.members)) << ' '
            << (s.best_fitness_history.empty() ? "-" : join_reals(s.best_fitness_history)) << '\n';
        neat::save_genome(dir / "species" / (std::to_string(s.id) + ".genome"), s.representative);
    }
}

std::vector<neat::Species> read_species(const std::filesystem::path& dir)
{
    auto in = open_in(dir / "species.txt");
    std::vector<neat::Species> out;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty() || line.front() == '#') {
            continue;
        }
        std::istringstream row(line);
        neat::Species s;
        std::string extinct;
        std::string best;
        std::string members;
        std::string history;
        if (!(row >> s.id >> s.created_at >> extinct >> best >> s.stagnation >> s.peak_size >> members >> history)) {
            throw FormatError("species.txt: bad line '" + line + "'");
        }
        if (extinct != "none") {
            s.extinct_at = as_size(extinct);
        }
        s.best_fitness = parse_double(best);
        if (members != "-") {
            for (long long id : split_ids(members)) {
                s.members.push_back(id);
            }
        }
        if (history != "-") {
            s.best_fitness_history = split_reals(history);
        }
        s.representative = neat::load_genome(dir / "species" / (std::to_string(s.id) + ".genome")).genome;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<long long> genome_order(const neat::Population& pop)
{
    std::vector<long long> ids;
    for (const auto& g : pop.genomes) {
        ids.push_back(g.id);
    }
    return ids;
}

} // namespace

void LifelongRun::save_checkpoint(const std::filesystem::path& dir) const
{
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "state.txt");
        out << "format=" << kFormat << '\n';
        out << "master_seed=" << cfg_.eval.master_seed << '\n';
        out << "next_generation=" << generation_ << '\n';
        out << "population.size=" << pop_.size << '\n';
        out << "population.generation=" << pop_.generation << '\n';
        out << "population.next_genome_id=" << pop_.next_genome_id << '\n';
        out << "population.next_species_id=" << pop_.next_species_id << '\n';
        out << "genome_order=" << join_ids(genome_order(pop_)) << '\n';
        out << "regularizer.enabled=" << (regularizer_.enabled ? "true" : "false") << '\n';
        out << "regularizer.lambda=" << format_double(regularizer_.lambda) << '\n';
        out << "regularizer.reference=" << (regularizer_.reference ? "true" : "false") << '\n';
        out << "stages_completed=" << stage_final_.size() << '\n';
        for (std::size_t i = 0; i < stage_final_.size(); ++i) {
            out << "stage_order." << i << '=' << join_ids(genome_order(stage_final_[i])) << '\n';
        }
        for (const auto& [task, best] : stage_best_) {
            out << "stage_best." << task << '=' << format_double(best) << '\n';
        }
    }
    write_registry(dir / "registry.txt", registry_);
    write_genomes(dir / "population", pop_, nullptr);
    write_species(dir, pop_);
    if (regularizer_.reference) {
        neat::save_genome(dir / "reference.genome", *regularizer_.reference);
    }
    for (std::size_t i = 0; i < stage_final_.size(); ++i) {
        write_genomes(dir / ("stage_" + std::to_string(i)), stage_final_[i], &stage_fitness_[i]);
    }
    LifelongMetrics m = metrics_;
    m.species = tracker_.lifespans();
    write_metrics(dir / "metrics", m);
}

LifelongRun LifelongRun::resume(LifelongConfig cfg, const std::filesystem::path& dir)
{
    cfg.validate();
    const KeyValues kv = read_key_values(dir / "state.txt");
    if (require(kv, "format") != kFormat) {
        throw FormatError("unsupported checkpoint format '" + require(kv, "format") + "'");
    }
    if (std::stoull(require(kv, "master_seed")) != cfg.eval.master_seed) {
        throw ConfigError("checkpoint was written with master seed " + require(kv, "master_seed"));
    }

    LifelongRun run;
    run.cfg_ = std::move(cfg);
    run.generation_ = as_size(require(kv, "next_generation"));
    if (run.generation_ > run.cfg_.schedule.total_generations()) {
        throw ConfigError("checkpoint generation lies beyond the configured schedule");
    }
    run.registry_ = read_registry(dir / "registry.txt");

    run.pop_.size = as_size(require(kv, "population.size"));
    run.pop_.generation = as_size(require(kv, "population.generation"));
    run.pop_.next_genome_id = parse_int(require(kv, "population.next_genome_id"));
    run.pop_.next_species_id = parse_int(require(kv, "population.next_species_id"));
    run.pop_.genomes = read_genomes(dir / "population", split_ids(require(kv, "genome_order")), nullptr);
    run.pop_.species = read_species(dir);

    run.regularizer_.enabled = require(kv, "regularizer.enabled") == "true";
    run.regularizer_.lambda = parse_double(require(kv, "regularizer.lambda"));
    if (run.regularizer_.enabled != run.cfg_.regularizer.enabled ||
        run.regularizer_.lambda != run.cfg_.regularizer.lambda) {
        throw ConfigError("checkpoint regularizer settings differ from the configuration");
    }
    if (require(kv, "regularizer.reference") == "true") {
        run.regularizer_.reference = neat::load_genome(dir / "reference.genome").genome;
    }

    const std::size_t stages = as_size(require(kv, "stages_completed"));
    for (std::size_t i = 0; i < stages; ++i) {
        neat::FitnessTable fitness;
        neat::Population p;
        p.genomes = read_genomes(dir / ("stage_" + std::to_string(i)),
                                 split_ids(require(kv, "stage_order." + std::to_string(i))), &fitness);
        p.size = p.genomes.size();
        p.generation = p.genomes.empty() ? 0 : neat::load_genome(dir / ("stage_" + std::to_string(i)) /
                                                                 (std::to_string(p.genomes.front().id) + ".genome"))
                                                   .meta.generation;
        run.stage_final_.push_back(std::move(p));
        run.stage_fitness_.push_back(std::move(fitness));
    }
    for (const auto& [key, value] : kv) {
        if (key.starts_with("stage_best.")) {
            run.stage_best_.emplace(static_cast<int>(parse_int(key.substr(11))), parse_double(value));
        }
    }

    run.metrics_ = read_metrics(dir / "metrics");
    run.tracker_ = SpeciesTracker::restore(run.metrics_.species);
    return run;
}

} // namespace lswarm::evolve
