#include "lswarm/neat/genome.hpp"

#include "lswarm/common/error.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace lswarm::neat {

std::string_view to_string(NodeKind kind) noexcept
{
    switch (kind) {
    case NodeKind::input:
        return "input";
    case NodeKind::hidden:
        return "hidden";
    case NodeKind::output:
        return "output";
    }
    return "hidden";
}

NodeKind parse_node_kind(std::string_view text)
{
    if (text == "input") {
        return NodeKind::input;
    }
    if (text == "hidden") {
        return NodeKind::hidden;
    }
    if (text == "output") {
        return NodeKind::output;
    }
    throw FormatError("unknown node kind '" + std::string(text) + "'");
}

namespace {

std::size_t count_kind(const Genome& g, NodeKind kind)
{
    return static_cast<std::size_t>(
        std::count_if(g.nodes.begin(), g.nodes.end(), [kind](const auto& kv) { return kv.second.kind == kind; }));
}

} // namespace

std::size_t Genome::input_count() const noexcept { return count_kind(*this, NodeKind::input); }
std::size_t Genome::output_count() const noexcept { return count_kind(*this, NodeKind::output); }
std::size_t Genome::hidden_count() const noexcept { return count_kind(*this, NodeKind::hidden); }

bool Genome::has_link(NodeId source, NodeId target) const noexcept
{
    return std::any_of(connections.begin(), connections.end(), [&](const auto& kv) {
        return kv.second.source == source && kv.second.target == target;
    });
}

bool Genome::would_create_cycle(NodeId source, NodeId target) const
{
    if (source == target) {
        return true;
    }
    // Is `source` reachable from `target`?
    std::set<NodeId> visited{target};
    std::vector<NodeId> frontier{target};
    while (!frontier.empty()) {
        const NodeId at = frontier.back();
        frontier.pop_back();
        for (const auto& [innov, c] : connections) {
            if (c.source != at) {
                continue;
            }
            if (c.target == source) {
                return true;
            }
            if (visited.insert(c.target).second) {
                frontier.push_back(c.target);
            }
        }
    }
    return false;
}

bool Genome::is_acyclic() const
{
    // Kahn's algorithm over all connection genes.
    std::map<NodeId, std::size_t> indegree;
    std::map<NodeId, std::vector<NodeId>> out;
    for (const auto& [id, n] : nodes) {
        indegree[id] = 0;
    }
    for (const auto& [innov, c] : connections) {
        ++indegree[c.target];
        indegree.try_emplace(c.source, 0);
        out[c.source].push_back(c.target);
    }
    std::vector<NodeId> ready;
    for (const auto& [id, d] : indegree) {
        if (d == 0) {
            ready.push_back(id);
        }
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
        const NodeId at = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId t : out[at]) {
            if (--indegree[t] == 0) {
                ready.push_back(t);
            }
        }
    }
    return seen == indegree.size();
}

void Genome::validate(std::size_t expected_inputs) const
{
    const auto fail = [this](const std::string& why) {
        throw StructuralError("genome " + std::to_string(id) + ": " + why);
    };
    for (const auto& [key, n] : nodes) {
        if (key != n.id) {
            fail("node key mismatch");
        }
        if (n.kind == NodeKind::input && n.bias != 0.0) {
            fail("input node carries a bias");
        }
        if ((n.kind == NodeKind::input) != (n.id < 0)) {
            fail("node " + std::to_string(n.id) + " kind does not match id range");
        }
        if (n.kind == NodeKind::output && n.id >= static_cast<NodeId>(kOutputCount)) {
            fail("output id out of range");
        }
        if (n.kind == NodeKind::input && input_index(n.id) >= expected_inputs) {
            fail("input id out of range");
        }
    }
    if (input_count() != expected_inputs) {
        fail("expected " + std::to_string(expected_inputs) + " inputs, found " + std::to_string(input_count()));
    }
    if (output_count() != kOutputCount) {
        fail("expected 3 outputs");
    }
    std::set<std::pair<NodeId, NodeId>> links;
    for (const auto& [key, c] : connections) {
        if (key != c.innovation) {
            fail("connection key mismatch");
        }
        if (!nodes.contains(c.source) || !nodes.contains(c.target)) {
            fail("dangling connection " + std::to_string(c.innovation));
        }
        if (nodes.at(c.target).kind == NodeKind::input) {
            fail("connection into an input node");
        }
        if (!links.emplace(c.source, c.target).second) {
            fail("duplicate link");
        }
    }
    if (!is_acyclic()) {
        fail("cycle");
    }
}

bool Genome::same_genes(const Genome& other) const noexcept
{
    return nodes == other.nodes && connections == other.connections;
}

} // namespace lswarm::neat
