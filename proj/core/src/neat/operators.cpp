#include "lswarm/neat/operators.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <vector>

namespace lswarm::neat {

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double gaussian(Rng& rng, double mean, double stdev)
{
    if (stdev == 0.0) {
        return mean;
    }
    return std::normal_distribution<double>(mean, stdev)(rng);
}

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

// Shared shape of the weight and bias mutation: perturb, else replace, else keep.
double mutate_value(double value, double mutate_rate, double power, double replace_rate, double init_mean,
                    double init_stdev, double lo, double hi, Rng& rng)
{
    const double r = uniform01(rng);
    if (r < mutate_rate) {
        return std::clamp(value + gaussian(rng, 0.0, power), lo, hi);
    }
    if (r < mutate_rate + replace_rate) {
        return std::clamp(gaussian(rng, init_mean, init_stdev), lo, hi);
    }
    return value;
}

double init_weight(const NeatConfig& cfg, Rng& rng)
{
    return std::clamp(gaussian(rng, cfg.weight_init_mean, cfg.weight_init_stdev), cfg.weight_min_value,
                      cfg.weight_max_value);
}

double init_bias(const NeatConfig& cfg, Rng& rng)
{
    return std::clamp(gaussian(rng, cfg.bias_init_mean, cfg.bias_init_stdev), cfg.bias_min_value,
                      cfg.bias_max_value);
}

template <typename Map>
auto nth(Map& m, std::size_t n)
{
    auto it = m.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(n));
    return it;
}

} // namespace

Genome initial_genome(GenomeId id, std::size_t input_width, const NeatConfig& cfg, InnovationRegistry& registry,
                      Rng& rng)
{
    std::vector<NodeId> hidden;
    for (std::size_t h = 0; h < cfg.num_hidden; ++h) {
        hidden.push_back(kFirstHiddenId + static_cast<NodeId>(h));
    }
    // Hidden ids are shared by every initial genome.
    registry.reserve_nodes(kFirstHiddenId + static_cast<NodeId>(cfg.num_hidden));

    // Register every eligible link up front so innovation numbers do not
    // depend on which links the sampling keeps.
    std::vector<std::pair<NodeId, NodeId>> eligible;
    for (std::size_t i = 0; i < input_width; ++i) {
        for (std::size_t o = 0; o < kOutputCount; ++o) {
            eligible.emplace_back(input_node_id(i), output_node_id(o));
        }
        for (NodeId h : hidden) {
            eligible.emplace_back(input_node_id(i), h);
        }
    }
    for (NodeId h : hidden) {
        for (std::size_t o = 0; o < kOutputCount; ++o) {
            eligible.emplace_back(h, output_node_id(o));
        }
    }
    std::vector<Innovation> innovations;
    innovations.reserve(eligible.size());
    for (const auto& [s, t] : eligible) {
        innovations.push_back(registry.connection(s, t));
    }

    Genome g;
    g.id = id;
    for (std::size_t i = 0; i < input_width; ++i) {
        g.nodes.emplace(input_node_id(i), NodeGene{input_node_id(i), NodeKind::input, 0.0});
    }
    for (std::size_t o = 0; o < kOutputCount; ++o) {
        g.nodes.emplace(output_node_id(o), NodeGene{output_node_id(o), NodeKind::output, init_bias(cfg, rng)});
    }
    for (NodeId h : hidden) {
        g.nodes.emplace(h, NodeGene{h, NodeKind::hidden, init_bias(cfg, rng)});
    }
    for (std::size_t k = 0; k < eligible.size(); ++k) {
        if (uniform01(rng) < cfg.initial_connection_fraction) {
            const auto [s, t] = eligible[k];
            g.connections.emplace(innovations[k],
                                  ConnectionGene{innovations[k], s, t, init_weight(cfg, rng), cfg.enabled_default});
        }
    }
    return g;
}

bool split_connection(Genome& genome, Innovation innovation, InnovationRegistry& registry)
{
    auto it = genome.connections.find(innovation);
    if (it == genome.connections.end()) {
        return false;
    }
    const ConnectionGene old = it->second;
    const auto split = registry.split(old);
    if (genome.nodes.contains(split.node)) {
        // This link was split before in this lineage; the node already exists.
        return false;
    }
    it->second.enabled = false;
    genome.nodes.emplace(split.node, NodeGene{split.node, NodeKind::hidden, 0.0});
    genome.connections.emplace(split.incoming, ConnectionGene{split.incoming, old.source, split.node, 1.0, true});
    genome.connections.emplace(split.outgoing, ConnectionGene{split.outgoing, split.node, old.target, old.weight, true});
    return true;
}

bool mutate_add_node(Genome& genome, InnovationRegistry& registry, Rng& rng)
{
    std::vector<Innovation> enabled;
    for (const auto& [innov, c] : genome.connections) {
        if (c.enabled) {
            enabled.push_back(innov);
        }
    }
    if (enabled.empty()) {
        return false;
    }
    return split_connection(genome, enabled[pick(rng, enabled.size())], registry);
}

bool mutate_delete_node(Genome& genome, Rng& rng)
{
    std::vector<NodeId> hidden;
    for (const auto& [id, n] : genome.nodes) {
        if (n.kind == NodeKind::hidden) {
            hidden.push_back(id);
        }
    }
    if (hidden.empty()) {
        return false;
    }
    const NodeId victim = hidden[pick(rng, hidden.size())];
    std::erase_if(genome.connections,
                  [victim](const auto& kv) { return kv.second.source == victim || kv.second.target == victim; });
    genome.nodes.erase(victim);
    return true;
}

bool mutate_add_connection(Genome& genome, const NeatConfig& cfg, InnovationRegistry& registry, Rng& rng)
{
    std::vector<NodeId> sources;
    std::vector<NodeId> targets;
    for (const auto& [id, n] : genome.nodes) {
        sources.push_back(id);
        if (n.kind != NodeKind::input) {
            targets.push_back(id);
        }
    }
    if (targets.empty()) {
        return false;
    }
    const NodeId s = sources[pick(rng, sources.size())];
    const NodeId t = targets[pick(rng, targets.size())];
    const bool both_outputs = genome.nodes.at(s).kind == NodeKind::output && genome.nodes.at(t).kind == NodeKind::output;
    if (both_outputs || genome.has_link(s, t) || genome.would_create_cycle(s, t)) {
        return false;
    }
    const Innovation innov = registry.connection(s, t);
    genome.connections.emplace(innov, ConnectionGene{innov, s, t, init_weight(cfg, rng), cfg.enabled_default});
    return true;
}

bool mutate_delete_connection(Genome& genome, Rng& rng)
{
    if (genome.connections.empty()) {
        return false;
    }
    genome.connections.erase(nth(genome.connections, pick(rng, genome.connections.size())));
    return true;
}

Genome mutate(Genome genome, const NeatConfig& cfg, InnovationRegistry& registry, Rng& rng)
{
    if (uniform01(rng) < cfg.node_add_prob) {
        mutate_add_node(genome, registry, rng);
    }
    if (uniform01(rng) < cfg.node_delete_prob) {
        mutate_delete_node(genome, rng);
    }
    if (uniform01(rng) < cfg.conn_add_prob) {
        mutate_add_connection(genome, cfg, registry, rng);
    }
    if (uniform01(rng) < cfg.conn_delete_prob) {
        mutate_delete_connection(genome, rng);
    }

    for (auto& [innov, c] : genome.connections) {
        c.weight = mutate_value(c.weight, cfg.weight_mutate_rate, cfg.weight_mutate_power, cfg.weight_replace_rate,
                                cfg.weight_init_mean, cfg.weight_init_stdev, cfg.weight_min_value,
                                cfg.weight_max_value, rng);
        if (uniform01(rng) < cfg.enabled_mutate_rate) {
            c.enabled = !c.enabled;
        }
    }
    for (auto& [id, n] : genome.nodes) {
        if (n.kind == NodeKind::input) {
            continue;
        }
        n.bias = mutate_value(n.bias, cfg.bias_mutate_rate, cfg.bias_mutate_power, cfg.bias_replace_rate,
                              cfg.bias_init_mean, cfg.bias_init_stdev, cfg.bias_min_value, cfg.bias_max_value, rng);
    }
    return genome;
}

Genome crossover(const Genome& fitter, const Genome& other, GenomeId child_id, Rng& rng)
{
    Genome child;
    child.id = child_id;
    for (const auto& [innov, gene] : fitter.connections) {
        const auto match = other.connections.find(innov);
        if (match != other.connections.end() && uniform01(rng) < 0.5) {
            child.connections.emplace(innov, match->second);
        } else {
            child.connections.emplace(innov, gene);
        }
    }
    for (const auto& [id, gene] : fitter.nodes) {
        const auto match = other.nodes.find(id);
        if (match != other.nodes.end() && uniform01(rng) < 0.5) {
            child.nodes.emplace(id, match->second);
        } else {
            child.nodes.emplace(id, gene);
        }
    }
    return child;
}

} // namespace lswarm::neat
