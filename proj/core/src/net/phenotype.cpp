#include "lswarm/net/phenotype.hpp"

#include "lswarm/common/error.hpp"

#include <map>
#include <set>
#include <string>

namespace lswarm::net {

Phenotype Phenotype::decode(const neat::Genome& genome)
{
    using neat::NodeId;
    using neat::NodeKind;

    Phenotype p;
    p.input_width_ = genome.input_count();

    // Enabled links between nodes that still exist.
    std::map<NodeId, std::vector<const neat::ConnectionGene*>> incoming;
    std::map<NodeId, std::size_t> pending;
    for (const auto& [id, n] : genome.nodes) {
        if (n.kind != NodeKind::input) {
            pending[id] = 0;
        }
    }
    for (const auto& [innov, c] : genome.connections) {
        if (!c.enabled || !genome.nodes.contains(c.source) || !pending.contains(c.target)) {
            continue;
        }
        incoming[c.target].push_back(&c);
        if (pending.contains(c.source)) {
            ++pending[c.target];
        }
    }

    // Kahn's algorithm; the ready set is ordered by node id for a stable layout.
    std::map<NodeId, std::vector<NodeId>> dependents;
    for (const auto& [target, links] : incoming) {
        for (const auto* c : links) {
            if (pending.contains(c->source)) {
                dependents[c->source].push_back(target);
            }
        }
    }
    std::map<NodeId, std::size_t> slot_of;
    for (const auto& [id, n] : genome.nodes) {
        if (n.kind == NodeKind::input) {
            const auto index = neat::input_index(id);
            if (index >= p.input_width_) {
                throw StructuralError("input node " + std::to_string(id) + " outside input range");
            }
            slot_of[id] = index;
        }
    }
    std::set<NodeId> ready;
    for (const auto& [id, d] : pending) {
        if (d == 0) {
            ready.insert(id);
        }
    }
    while (!ready.empty()) {
        const NodeId id = *ready.begin();
        ready.erase(ready.begin());
        Unit u{id, genome.nodes.at(id).bias, {}};
        for (const auto* c : incoming[id]) {
            u.incoming.push_back({slot_of.at(c->source), c->weight});
        }
        slot_of[id] = p.input_width_ + p.units_.size();
        p.units_.push_back(std::move(u));
        for (NodeId t : dependents[id]) {
            if (--pending[t] == 0) {
                ready.insert(t);
            }
        }
    }
    if (p.units_.size() != pending.size()) {
        throw StructuralError("genome " + std::to_string(genome.id) + " has a cycle among enabled connections");
    }
    for (std::size_t o = 0; o < neat::kOutputCount; ++o) {
        const auto it = slot_of.find(neat::output_node_id(o));
        if (it == slot_of.end()) {
            throw StructuralError("genome " + std::to_string(genome.id) + " is missing output " + std::to_string(o));
        }
        p.output_slots_[o] = it->second;
    }
    return p;
}

Action Phenotype::activate(std::span<const double> observation, std::vector<double>& scratch) const
{
    if (observation.size() != input_width_) {
        throw ContractError("observation width " + std::to_string(observation.size()) + " != network input width " +
                            std::to_string(input_width_));
    }
    scratch.resize(slot_count());
    std::copy(observation.begin(), observation.end(), scratch.begin());
    std::size_t slot = input_width_;
    for (const Unit& u : units_) {
        double sum = u.bias;
        for (const Link& l : u.incoming) {
            sum += l.weight * scratch[l.source_slot];
        }
        scratch[slot++] = steep_sigmoid(sum);
    }
    Action out{};
    for (std::size_t o = 0; o < out.size(); ++o) {
        out[o] = scratch[output_slots_[o]];
    }
    return out;
}

Action Phenotype::activate(std::span<const double> observation) const
{
    std::vector<double> scratch;
    return activate(observation, scratch);
}

bool operator==(const Phenotype::Link& a, const Phenotype::Link& b) noexcept
{
    return a.source_slot == b.source_slot && a.weight == b.weight;
}

bool operator==(const Phenotype::Unit& a, const Phenotype::Unit& b) noexcept
{
    return a.node == b.node && a.bias == b.bias && a.incoming == b.incoming;
}

bool operator==(const Phenotype& a, const Phenotype& b) noexcept
{
    return a.input_width_ == b.input_width_ && a.units_ == b.units_ && a.output_slots_ == b.output_slots_;
}

Action to_wheel_velocities(const Action& raw, double v_max) noexcept
{
    Action v{};
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = (2.0 * raw[i] - 1.0) * v_max;
    }
    return v;
}

} // namespace lswarm::net
