#include "lswarm/neat/population.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/neat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lswarm::neat {

const Genome* Population::find(GenomeId id) const noexcept
{
    const auto it = std::find_if(genomes.begin(), genomes.end(), [id](const Genome& g) { return g.id == id; });
    return it == genomes.end() ? nullptr : &*it;
}

const Species* Population::species_of(GenomeId id) const noexcept
{
    for (const Species& s : species) {
        if (s.alive() && std::find(s.members.begin(), s.members.end(), id) != s.members.end()) {
            return &s;
        }
    }
    return nullptr;
}

std::vector<SpeciesId> Population::alive_species() const
{
    std::vector<SpeciesId> ids;
    for (const Species& s : species) {
        if (s.alive()) {
            ids.push_back(s.id);
        }
    }
    return ids;
}

Population initial_population(std::uint64_t seed, std::size_t input_width, std::size_t population_size,
                              const NeatConfig& cfg, InnovationRegistry& registry)
{
    if (input_width == 0) {
        throw ConfigError("input width must be positive");
    }
    if (population_size < 2) {
        throw ConfigError("pop_size: must be at least 2");
    }
    Rng rng(derive_seed({tag(Stream::init_population), seed}));
    Population pop;
    pop.size = population_size;
    pop.genomes.reserve(population_size);
    for (std::size_t i = 0; i < population_size; ++i) {
        pop.genomes.push_back(initial_genome(pop.next_genome_id++, input_width, cfg, registry, rng));
    }
    return speciate(std::move(pop), cfg.compatibility_threshold, DistanceConfig::from(cfg));
}

Population speciate(Population pop, double threshold, const DistanceConfig& cfg)
{
    std::vector<std::size_t> open; // indices into pop.species, in founding order
    for (std::size_t i = 0; i < pop.species.size(); ++i) {
        if (pop.species[i].alive()) {
            pop.species[i].members.clear();
            open.push_back(i);
        }
    }
    const std::size_t carried_over = open.size();

    for (const Genome& g : pop.genomes) {
        bool placed = false;
        for (std::size_t idx : open) {
            Species& s = pop.species[idx];
            if (genetic_distance(s.representative, g, cfg) < threshold) {
                s.members.push_back(g.id);
                placed = true;
                break;
            }
        }
        if (!placed) {
            Species founded;
            founded.id = pop.next_species_id++;
            founded.representative = g;
            founded.members.push_back(g.id);
            founded.created_at = pop.generation;
            pop.species.push_back(std::move(founded));
            open.push_back(pop.species.size() - 1);
        }
    }

    for (std::size_t k = 0; k < open.size(); ++k) {
        Species& s = pop.species[open[k]];
        if (s.members.empty()) {
            s.extinct_at = pop.generation;
            continue;
        }
        if (k < carried_over) {
            // Member closest to the previous representative takes over.
            const Genome* best = nullptr;
            double best_d = 0.0;
            for (GenomeId id : s.members) {
                const Genome* g = pop.find(id);
                const double d = genetic_distance(s.representative, *g, cfg);
                if (best == nullptr || d < best_d) {
                    best = g;
                    best_d = d;
                }
            }
            s.representative = *best;
        }
        s.peak_size = std::max(s.peak_size, s.members.size());
    }
    return pop;
}

namespace {

struct Ranked {
    GenomeId id;
    double fitness;
};

// Fitness descending, id ascending.
void rank(std::vector<Ranked>& v)
{
    std::sort(v.begin(), v.end(), [](const Ranked& a, const Ranked& b) {
        return a.fitness != b.fitness ? a.fitness > b.fitness : a.id < b.id;
    });
}

double fitness_of(const FitnessTable& table, GenomeId id)
{
    const auto it = table.find(id);
    if (it == table.end()) {
        throw ContractError("no fitness entry for genome " + std::to_string(id));
    }
    return it->second;
}

// Largest-remainder apportionment of `total` slots by `weights`.
std::vector<std::size_t> apportion(const std::vector<double>& weights, std::size_t total)
{
    const std::size_t n = weights.size();
    std::vector<std::size_t> out(n, 0);
    if (n == 0 || total == 0) {
        return out;
    }
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<double> quota(n);
    for (std::size_t i = 0; i < n; ++i) {
        quota[i] = (sum > 0.0 && std::isfinite(sum)) ? static_cast<double>(total) * weights[i] / sum
                                                     : static_cast<double>(total) / static_cast<double>(n);
    }
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = static_cast<std::size_t>(std::floor(quota[i]));
        assigned += out[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return quota[a] - std::floor(quota[a]) > quota[b] - std::floor(quota[b]);
    });
    for (std::size_t k = 0; assigned < total; k = (k + 1) % n) {
        ++out[order[k]];
        ++assigned;
    }
    return out;
}

} // namespace

Population reproduce(const Population& pop, const FitnessTable& fitness, const NeatConfig& cfg,
                     InnovationRegistry& registry, Rng& rng, ReproductionReport* report)
{
    Population next;
    next.species = pop.species;
    next.size = pop.size;
    next.generation = pop.generation + 1;
    next.next_genome_id = pop.next_genome_id;
    next.next_species_id = pop.next_species_id;

    // Stagnation bookkeeping on species that have members this generation.
    struct Entry {
        std::size_t index;
        double fitness;
    };
    std::vector<Entry> active;
    for (std::size_t i = 0; i < next.species.size(); ++i) {
        Species& s = next.species[i];
        if (!s.alive() || s.members.empty()) {
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (GenomeId id : s.members) {
            best = std::max(best, fitness_of(fitness, id));
        }
        s.best_fitness_history.push_back(best);
        if (best > s.best_fitness) {
            s.best_fitness = best;
            s.stagnation = 0;
        } else {
            ++s.stagnation;
        }
        active.push_back({i, best});
    }

    std::sort(active.begin(), active.end(), [&](const Entry& a, const Entry& b) {
        return a.fitness != b.fitness ? a.fitness < b.fitness
                                      : next.species[a.index].id < next.species[b.index].id;
    });
    std::size_t non_stagnant = active.size();
    std::vector<std::size_t> survivors;
    for (std::size_t k = 0; k < active.size(); ++k) {
        Species& s = next.species[active[k].index];
        bool stagnant = false;
        if (non_stagnant > cfg.species_elitism) {
            stagnant = s.stagnation > cfg.max_stagnation;
        }
        if (active.size() - k <= cfg.species_elitism) {
            stagnant = false;
        }
        if (stagnant) {
            --non_stagnant;
            s.extinct_at = next.generation;
            s.members.clear();
            if (report) {
                report->stagnant_removed.push_back(s.id);
            }
        } else {
            survivors.push_back(active[k].index);
        }
    }
    if (survivors.empty() && !active.empty()) {
        // species_elitism = 0 and everything stagnated: keep the best species.
        Species& s = next.species[active.back().index];
        s.extinct_at.reset();
        s.members = pop.species[active.back().index].members;
        survivors.push_back(active.back().index);
    }
    std::sort(survivors.begin(), survivors.end(),
              [&](std::size_t a, std::size_t b) { return next.species[a].id < next.species[b].id; });

    std::vector<Ranked> pool;
    for (std::size_t idx : survivors) {
        for (GenomeId id : next.species[idx].members) {
            pool.push_back({id, fitness_of(fitness, id)});
        }
    }
    rank(pool);

    const std::size_t n_elite = std::min({cfg.elitism, pool.size(), pop.size});
    for (std::size_t k = 0; k < n_elite; ++k) {
        next.genomes.push_back(*pop.find(pool[k].id));
        if (report) {
            report->elites.push_back(pool[k].id);
        }
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Ranked& r : pool) {
        lo = std::min(lo, r.fitness);
        hi = std::max(hi, r.fitness);
    }
    const double range = std::max(1.0, hi - lo);
    std::vector<double> adjusted;
    for (std::size_t idx : survivors) {
        const auto& members = next.species[idx].members;
        double mean = 0.0;
        for (GenomeId id : members) {
            mean += fitness_of(fitness, id);
        }
        mean /= static_cast<double>(members.size());
        adjusted.push_back((mean - lo) / range);
    }
    const std::vector<std::size_t> spawn = apportion(adjusted, pop.size - n_elite);

    for (std::size_t k = 0; k < survivors.size(); ++k) {
        const Species& s = next.species[survivors[k]];
        if (report) {
            report->offspring[s.id] = spawn[k];
        }
        if (spawn[k] == 0) {
            continue;
        }
        std::vector<Ranked> members;
        for (GenomeId id : s.members) {
            members.push_back({id, fitness_of(fitness, id)});
        }
        rank(members);
        const auto cutoff = std::min(
            members.size(),
            std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(cfg.survival_threshold *
                                                                        static_cast<double>(members.size())))));
        std::uniform_int_distribution<std::size_t> choose(0, cutoff - 1);
        for (std::size_t c = 0; c < spawn[k]; ++c) {
            const Ranked& a = members[choose(rng)];
            const Ranked& b = members[choose(rng)];
            const bool a_fitter = a.fitness >= b.fitness;
            const Genome& fitter = *pop.find(a_fitter ? a.id : b.id);
            const Genome& other = *pop.find(a_fitter ? b.id : a.id);
            Genome child = crossover(fitter, other, next.next_genome_id++, rng);
            next.genomes.push_back(mutate(std::move(child), cfg, registry, rng));
        }
    }
    return next;
}

} // namespace lswarm::neat
