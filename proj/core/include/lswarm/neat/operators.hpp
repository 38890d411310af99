#pragma once

#include "lswarm/common/seed.hpp"
#include "lswarm/neat/config.hpp"
#include "lswarm/neat/genome.hpp"
#include "lswarm/neat/innovation.hpp"

#include <cstddef>

namespace lswarm::neat {

/// One freshly wired genome: `input_width` inputs, num_hidden hidden nodes,
/// three outputs, and each input->output, input->hidden and hidden->output
/// link present with probability initial_connection_fraction.
Genome initial_genome(GenomeId id, std::size_t input_width, const NeatConfig& cfg,
                      InnovationRegistry& registry, Rng& rng);

/// Applies every structural and parametric mutation once, each at its
/// configured rate. Never produces a cycle or a duplicate link.
Genome mutate(Genome genome, const NeatConfig& cfg, InnovationRegistry& registry, Rng& rng);

/// Matching genes come from either parent with equal probability; disjoint
/// and excess genes come from `fitter` only. The caller decides which
/// parent is fitter (ties: pass the first as fitter).
Genome crossover(const Genome& fitter, const Genome& other, GenomeId child_id, Rng& rng);

// Individual mutation steps, exposed for targeted tests.
bool mutate_add_node(Genome& genome, InnovationRegistry& registry, Rng& rng);
bool mutate_delete_node(Genome& genome, Rng& rng);
bool mutate_add_connection(Genome& genome, const NeatConfig& cfg, InnovationRegistry& registry, Rng& rng);
bool mutate_delete_connection(Genome& genome, Rng& rng);

/// Splits connection `innovation`: the link is disabled, a hidden node is
/// inserted, source->node gets weight 1 and node->target inherits the
/// split link's weight.
bool split_connection(Genome& genome, Innovation innovation, InnovationRegistry& registry);

} // namespace lswarm::neat
