#pragma once

#include "lswarm/neat/genome.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lswarm::net {

/// Steepened sigmoid 1 / (1 + e^(-4.9 x)). The exponent is clamped to
/// [-30, 30] so the result stays strictly inside (0, 1).
inline double steep_sigmoid(double x) noexcept
{
    double z = 4.9 * x;
    z = z < -30.0 ? -30.0 : (z > 30.0 ? 30.0 : z);
    return 1.0 / (1.0 + std::exp(-z));
}

using Action = std::array<double, neat::kOutputCount>;

/// Decoded feed-forward controller.
///
/// Activations live in one flat buffer: slots [0, input_width) hold the
/// observation, the remaining slots hold non-input nodes in topological
/// order. Disabled connections and links from pruned nodes are dropped.
class Phenotype {
public:
    struct Link {
        std::size_t source_slot;
        double weight;
    };
    struct Unit {
        neat::NodeId node;
        double bias;
        std::vector<Link> incoming;
    };

    /// Throws StructuralError if the enabled graph has a cycle or an output is missing.
    static Phenotype decode(const neat::Genome& genome);

    [[nodiscard]] std::size_t input_width() const noexcept { return input_width_; }
    [[nodiscard]] std::size_t slot_count() const noexcept { return input_width_ + units_.size(); }
    [[nodiscard]] const std::vector<Unit>& units() const noexcept { return units_; }
    [[nodiscard]] const std::array<std::size_t, neat::kOutputCount>& output_slots() const noexcept
    {
        return output_slots_;
    }

    /// Raw outputs in (0, 1). `scratch` is resized as needed; give each
    /// worker its own buffer. Throws ContractError on a wrong observation width.
    Action activate(std::span<const double> observation, std::vector<double>& scratch) const;
    Action activate(std::span<const double> observation) const;

    friend bool operator==(const Phenotype& a, const Phenotype& b) noexcept;

private:
    std::size_t input_width_ = 0;
    std::vector<Unit> units_;
    std::array<std::size_t, neat::kOutputCount> output_slots_{};
};

bool operator==(const Phenotype::Link& a, const Phenotype::Link& b) noexcept;
bool operator==(const Phenotype::Unit& a, const Phenotype::Unit& b) noexcept;

/// Affine map (0, 1) -> [-v_max, v_max]: v = (2 raw - 1) v_max.
Action to_wheel_velocities(const Action& raw, double v_max) noexcept;

} // namespace lswarm::net
