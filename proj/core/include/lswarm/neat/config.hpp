#pragma once

#include <cstddef>

namespace lswarm::neat {

/// NEAT parameter table. Field names follow the neat-python configuration
/// keys; defaults are the values used for the swarm foraging experiments.
struct NeatConfig {
    std::size_t pop_size = 300;
    std::size_t num_outputs = 3;
    std::size_t num_hidden = 1;
    double initial_connection_fraction = 0.5; // partial_direct 0.5
    bool feed_forward = true;

    double compatibility_excess_coefficient = 1.0;
    double compatibility_disjoint_coefficient = 1.0;
    double compatibility_weight_coefficient = 0.6;
    double compatibility_threshold = 3.0;

    double conn_add_prob = 0.2;
    double conn_delete_prob = 0.2;
    double node_add_prob = 0.2;
    double node_delete_prob = 0.2;

    double activation_mutate_rate = 0.0;

    double bias_init_mean = 0.0;
    double bias_init_stdev = 1.0;
    double bias_replace_rate = 0.1;
    double bias_mutate_rate = 0.7;
    double bias_mutate_power = 0.5;
    double bias_max_value = 5.0;
    double bias_min_value = -5.0;

    double response_init_mean = 1.0;
    double response_init_stdev = 0.0;
    double response_replace_rate = 0.0;
    double response_mutate_rate = 0.0;
    double response_mutate_power = 0.0;
    double response_max_value = 5.0;
    double response_min_value = -5.0;

    double weight_init_mean = 0.0;
    double weight_init_stdev = 1.0;
    double weight_replace_rate = 0.1;
    double weight_mutate_rate = 0.8;
    double weight_mutate_power = 1.0;
    double weight_max_value = 5.0;
    double weight_min_value = -5.0;

    bool enabled_default = true;
    double enabled_mutate_rate = 0.01;

    std::size_t max_stagnation = 20;
    std::size_t species_elitism = 1;
    std::size_t elitism = 5;
    double survival_threshold = 0.2;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    /// Every mutation probability set to zero.
    [[nodiscard]] NeatConfig without_mutation() const;

    friend bool operator==(const NeatConfig&, const NeatConfig&) = default;
};

} // namespace lswarm::neat
