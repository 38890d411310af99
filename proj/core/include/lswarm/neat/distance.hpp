#pragma once

#include "lswarm/neat/config.hpp"
#include "lswarm/neat/genome.hpp"

#include <cstddef>

namespace lswarm::neat {

struct DistanceConfig {
    double c1 = 1.0; // excess
    double c2 = 1.0; // disjoint
    double c3 = 0.6; // mean weight difference

    static DistanceConfig from(const NeatConfig& cfg) noexcept
    {
        return {cfg.compatibility_excess_coefficient, cfg.compatibility_disjoint_coefficient,
                cfg.compatibility_weight_coefficient};
    }
};

/// Alignment counts behind a distance value.
///
/// Genes are connection genes (aligned by innovation) plus hidden and output
/// node genes (aligned by node id). Input nodes carry no evolvable parameter
/// and are ignored. Disabled connections count like enabled ones.
struct GeneAlignment {
    std::size_t excess = 0;
    std::size_t disjoint = 0;
    std::size_t matching = 0;
    double parameter_difference_sum = 0.0; // sum of |dw| and |dbias| over matching genes
    std::size_t size_a = 0;
    std::size_t size_b = 0;

    [[nodiscard]] std::size_t max_size() const noexcept { return size_a > size_b ? size_a : size_b; }
    [[nodiscard]] double mean_difference() const noexcept
    {
        return matching == 0 ? 0.0 : parameter_difference_sum / static_cast<double>(matching);
    }
};

GeneAlignment align_genes(const Genome& a, const Genome& b);

/// Compatibility distance: c1*E/N + c2*D/N + c3*mean|dw|, N = larger gene count.
double genetic_distance(const Genome& a, const Genome& b, const DistanceConfig& cfg);

} // namespace lswarm::neat
