#pragma once

#include "lswarm/common/seed.hpp"
#include "lswarm/neat/config.hpp"
#include "lswarm/neat/distance.hpp"
#include "lswarm/neat/genome.hpp"
#include "lswarm/neat/innovation.hpp"

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace lswarm::neat {

using SpeciesId = std::int64_t;
using FitnessTable = std::map<GenomeId, double>;

struct Species {
    SpeciesId id = 0;
    Genome representative;
    std::vector<GenomeId> members;
    std::vector<double> best_fitness_history; // species fitness (max member) per reproduction
    double best_fitness = -std::numeric_limits<double>::infinity();
    std::size_t stagnation = 0; // reproductions since best_fitness last improved
    std::size_t created_at = 0;
    std::optional<std::size_t> extinct_at; // first generation without members
    std::size_t peak_size = 0;

    [[nodiscard]] bool alive() const noexcept { return !extinct_at.has_value(); }
    friend bool operator==(const Species&, const Species&) = default;
};

/// All species ever founded are kept; extinct ones stay in `species` with
/// `extinct_at` set so lifespans can be reported.
struct Population {
    std::vector<Genome> genomes;
    std::vector<Species> species;
    std::size_t size = 0;
    std::size_t generation = 0;
    GenomeId next_genome_id = 0;
    SpeciesId next_species_id = 1;

    [[nodiscard]] const Genome* find(GenomeId id) const noexcept;
    [[nodiscard]] const Species* species_of(GenomeId id) const noexcept;
    [[nodiscard]] std::vector<SpeciesId> alive_species() const;

    friend bool operator==(const Population&, const Population&) = default;
};

Population initial_population(std::uint64_t seed, std::size_t input_width, std::size_t population_size,
                              const NeatConfig& cfg, InnovationRegistry& registry);

/// Assigns every genome to the first alive species whose representative is
/// within `threshold`, founding new species otherwise. Each surviving
/// species then takes as representative the member closest to its previous
/// representative; species left empty go extinct at the current generation.
Population speciate(Population pop, double threshold, const DistanceConfig& cfg);

struct ReproductionReport {
    std::vector<SpeciesId> stagnant_removed;
    std::vector<GenomeId> elites;
    std::map<SpeciesId, std::size_t> offspring;
};

/// Produces generation + 1 from an evaluated, speciated population.
///
/// Stagnant species are dropped (the best `species_elitism` are always
/// kept), the global top `elitism` genomes are copied verbatim, and the
/// remaining slots are shared between species in proportion to their mean
/// adjusted fitness. Parents come from the top `survival_threshold` of each
/// species. The result is not speciated.
Population reproduce(const Population& pop, const FitnessTable& fitness, const NeatConfig& cfg,
                     InnovationRegistry& registry, Rng& rng, ReproductionReport* report = nullptr);

} // namespace lswarm::neat
