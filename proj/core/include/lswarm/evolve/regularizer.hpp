#pragma once

#include "lswarm/evolve/evaluation.hpp"
#include "lswarm/neat/distance.hpp"
#include "lswarm/neat/genome.hpp"
#include "lswarm/neat/population.hpp"

#include <optional>
#include <span>

namespace lswarm::evolve {

/// Genetic-distance penalty towards a frozen reference genome.
struct RegularizerState {
    bool enabled = false;
    double lambda = 0.0;
    std::optional<neat::Genome> reference;
};

/// raw - lambda * distance(reference, genome); raw when disabled or before
/// any reference exists.
double regularized_fitness(const FitnessRecord& record, const RegularizerState& regularizer,
                           const neat::Genome& genome, const neat::DistanceConfig& distance);

/// Genome with the highest `fitness`; ties go to the lowest genome id.
const neat::Genome& select_reference(std::span<const neat::Genome> genomes, const neat::FitnessTable& fitness);

} // namespace lswarm::evolve
