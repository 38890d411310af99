#include "lswarm/neat/innovation.hpp"

namespace lswarm::neat {

Innovation InnovationRegistry::connection(NodeId source, NodeId target)
{
    auto [it, inserted] = connections_.try_emplace({source, target}, next_innovation_);
    if (inserted) {
        ++next_innovation_;
    }
    return it->second;
}

InnovationRegistry::Split InnovationRegistry::split(const ConnectionGene& gene)
{
    auto [it, inserted] = splits_.try_emplace(gene.innovation, next_node_);
    if (inserted) {
        ++next_node_;
    }
    const NodeId node = it->second;
    return {node, connection(gene.source, node), connection(node, gene.target)};
}

InnovationRegistry InnovationRegistry::restore(Innovation next_innovation, NodeId next_node,
                                               std::map<std::pair<NodeId, NodeId>, Innovation> connections,
                                               std::map<Innovation, NodeId> splits)
{
    InnovationRegistry r;
    r.next_innovation_ = next_innovation;
    r.next_node_ = next_node;
    r.connections_ = std::move(connections);
    r.splits_ = std::move(splits);
    return r;
}

} // namespace lswarm::neat
