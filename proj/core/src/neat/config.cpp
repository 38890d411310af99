#include "lswarm/neat/config.hpp"

#include "lswarm/common/error.hpp"

#include <string>

namespace lswarm::neat {

namespace {

void require(bool ok, const char* key, const std::string& why)
{
    if (!ok) {
        throw ConfigError(std::string(key) + ": " + why);
    }
}

void require_probability(double p, const char* key)
{
    require(p >= 0.0 && p <= 1.0, key, "must be a probability in [0, 1]");
}

} // namespace

void NeatConfig::validate() const
{
    require(pop_size >= 2, "pop_size", "must be at least 2");
    require(num_outputs == 3, "num_outputs", "controllers drive exactly 3 wheels");
    require(feed_forward, "feed_forward", "only feed-forward networks are supported");
    require_probability(initial_connection_fraction, "initial_connection_fraction");
    require(compatibility_excess_coefficient >= 0.0, "compatibility_excess_coefficient", "must be non-negative");
    require(compatibility_disjoint_coefficient >= 0.0, "compatibility_disjoint_coefficient", "must be non-negative");
    require(compatibility_weight_coefficient >= 0.0, "compatibility_weight_coefficient", "must be non-negative");
    require(compatibility_threshold > 0.0, "compatibility_threshold", "must be positive");
    require_probability(conn_add_prob, "conn_add_prob");
    require_probability(conn_delete_prob, "conn_delete_prob");
    require_probability(node_add_prob, "node_add_prob");
    require_probability(node_delete_prob, "node_delete_prob");
    require(activation_mutate_rate == 0.0, "activation_mutate_rate", "activation evolution is not supported");
    require(bias_init_stdev >= 0.0, "bias_init_stdev", "must be non-negative");
    require_probability(bias_replace_rate, "bias_replace_rate");
    require_probability(bias_mutate_rate, "bias_mutate_rate");
    require(bias_replace_rate + bias_mutate_rate <= 1.0, "bias_replace_rate", "bias_mutate_rate + bias_replace_rate > 1");
    require(bias_mutate_power >= 0.0, "bias_mutate_power", "must be non-negative");
    require(bias_min_value < bias_max_value, "bias_min_value", "must be below bias_max_value");
    require(response_init_mean == 1.0 && response_init_stdev == 0.0, "response_init_mean",
            "response is fixed at 1.0");
    require(response_replace_rate == 0.0 && response_mutate_rate == 0.0 && response_mutate_power == 0.0,
            "response_mutate_rate", "response evolution is not supported");
    require(response_min_value <= 1.0 && response_max_value >= 1.0, "response_min_value", "must bracket 1.0");
    require(weight_init_stdev >= 0.0, "weight_init_stdev", "must be non-negative");
    require_probability(weight_replace_rate, "weight_replace_rate");
    require_probability(weight_mutate_rate, "weight_mutate_rate");
    require(weight_replace_rate + weight_mutate_rate <= 1.0, "weight_replace_rate",
            "weight_mutate_rate + weight_replace_rate > 1");
    require(weight_mutate_power >= 0.0, "weight_mutate_power", "must be non-negative");
    require(weight_min_value < weight_max_value, "weight_min_value", "must be below weight_max_value");
    require_probability(enabled_mutate_rate, "enabled_mutate_rate");
    require(survival_threshold > 0.0 && survival_threshold <= 1.0, "survival_threshold", "must be in (0, 1]");
}

NeatConfig NeatConfig::without_mutation() const
{
    NeatConfig c = *this;
    c.conn_add_prob = 0.0;
    c.conn_delete_prob = 0.0;
    c.node_add_prob = 0.0;
    c.node_delete_prob = 0.0;
    c.bias_replace_rate = 0.0;
    c.bias_mutate_rate = 0.0;
    c.weight_replace_rate = 0.0;
    c.weight_mutate_rate = 0.0;
    c.enabled_mutate_rate = 0.0;
    return c;
}

} // namespace lswarm::neat
