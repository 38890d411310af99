#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>

namespace lswarm::neat {

using NodeId = std::int64_t;
using Innovation = std::int64_t;
using GenomeId = std::int64_t;

/// Wheel-velocity outputs of every controller.
inline constexpr std::size_t kOutputCount = 3;

// Node id layout: inputs -1..-width, outputs 0..2, hidden nodes from 3 upward.
constexpr NodeId input_node_id(std::size_t index) noexcept { return -static_cast<NodeId>(index) - 1; }
constexpr NodeId output_node_id(std::size_t index) noexcept { return static_cast<NodeId>(index); }
constexpr std::size_t input_index(NodeId id) noexcept { return static_cast<std::size_t>(-id - 1); }
inline constexpr NodeId kFirstHiddenId = static_cast<NodeId>(kOutputCount);

enum class NodeKind { input, hidden, output };

std::string_view to_string(NodeKind kind) noexcept;
NodeKind parse_node_kind(std::string_view text);

struct NodeGene {
    NodeId id = 0;
    NodeKind kind = NodeKind::hidden;
    double bias = 0.0; // always 0 for inputs

    friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
    Innovation innovation = 0;
    NodeId source = 0;
    NodeId target = 0;
    double weight = 0.0;
    bool enabled = true;

    friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

/// Evolvable genotype. Genes are kept sorted (nodes by id, connections by
/// innovation) so iteration order, serialization and alignment are stable.
struct Genome {
    GenomeId id = 0;
    std::map<NodeId, NodeGene> nodes;
    std::map<Innovation, ConnectionGene> connections;

    [[nodiscard]] std::size_t input_count() const noexcept;
    [[nodiscard]] std::size_t output_count() const noexcept;
    [[nodiscard]] std::size_t hidden_count() const noexcept;

    [[nodiscard]] bool has_link(NodeId source, NodeId target) const noexcept;

    /// True if adding source->target would close a directed cycle over the
    /// existing connection genes (enabled or not).
    [[nodiscard]] bool would_create_cycle(NodeId source, NodeId target) const;
    [[nodiscard]] bool is_acyclic() const;

    /// Checks every structural invariant; throws StructuralError with a reason.
    void validate(std::size_t expected_inputs) const;

    /// Gene-wise equality, ignoring the genome id.
    [[nodiscard]] bool same_genes(const Genome& other) const noexcept;

    friend bool operator==(const Genome&, const Genome&) = default;
};

} // namespace lswarm::neat
