#pragma once

#include "lswarm/neat/genome.hpp"

#include <map>
#include <utility>

namespace lswarm::neat {

/// Historical markings for structural genes.
///
/// Connection innovations are keyed by (source, target) and node splits by
/// the split connection's innovation, for the lifetime of a run. The same
/// structural mutation therefore always receives the same numbers, which is
/// what lets crossover and genetic distance align genes across genomes.
class InnovationRegistry {
public:
    struct Split {
        NodeId node;
        Innovation incoming;
        Innovation outgoing;
    };

    InnovationRegistry() = default;

    Innovation connection(NodeId source, NodeId target);
    Split split(const ConnectionGene& gene);

    /// Ensures node ids below `end` are never handed out by split().
    void reserve_nodes(NodeId end) noexcept
    {
        if (next_node_ < end) {
            next_node_ = end;
        }
    }

    [[nodiscard]] Innovation next_innovation() const noexcept { return next_innovation_; }
    [[nodiscard]] NodeId next_node() const noexcept { return next_node_; }

    [[nodiscard]] const std::map<std::pair<NodeId, NodeId>, Innovation>& connection_memo() const noexcept
    {
        return connections_;
    }
    [[nodiscard]] const std::map<Innovation, NodeId>& split_memo() const noexcept { return splits_; }

    /// Rebuilds a registry from checkpointed tables.
    static InnovationRegistry restore(Innovation next_innovation, NodeId next_node,
                                      std::map<std::pair<NodeId, NodeId>, Innovation> connections,
                                      std::map<Innovation, NodeId> splits);

    friend bool operator==(const InnovationRegistry&, const InnovationRegistry&) = default;

private:
    Innovation next_innovation_ = 1;
    NodeId next_node_ = kFirstHiddenId;
    std::map<std::pair<NodeId, NodeId>, Innovation> connections_;
    std::map<Innovation, NodeId> splits_;
};

} // namespace lswarm::neat
