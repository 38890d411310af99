#include "lswarm/evolve/regularizer.hpp"

#include "lswarm/common/error.hpp"

namespace lswarm::evolve {

double regularized_fitness(const FitnessRecord& record, const RegularizerState& regularizer,
                           const neat::Genome& genome, const neat::DistanceConfig& distance)
{
    if (!regularizer.enabled || !regularizer.reference) {
        return record.raw;
    }
    return record.raw - regularizer.lambda * neat::genetic_distance(*regularizer.reference, genome, distance);
}

const neat::Genome& select_reference(std::span<const neat::Genome> genomes, const neat::FitnessTable& fitness)
{
    if (genomes.empty()) {
        throw ContractError("cannot select a reference from an empty population");
    }
    const neat::Genome* best = nullptr;
    double best_f = 0.0;
    for (const neat::Genome& g : genomes) {
        const double f = fitness.at(g.id);
        if (best == nullptr || f > best_f || (f == best_f && g.id < best->id)) {
            best = &g;
            best_f = f;
        }
    }
    return *best;
}

} // namespace lswarm::evolve
