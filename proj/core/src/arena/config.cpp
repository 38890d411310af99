#include "lswarm/arena/config.hpp"

#include "lswarm/common/error.hpp"

#include <algorithm>
#include <cmath>

namespace lswarm::arena {

namespace {

void require(bool ok, const char* key, const char* why)
{
    if (!ok) {
        throw ConfigError(std::string(key) + ": " + why);
    }
}

} // namespace

void ArenaConfig::validate() const
{
    require(size > 0.0, "size", "must be positive");
    require(n_agents > 0, "n_agents", "must be positive");
    require(n_boxes > 0, "n_boxes", "must be positive");
    require(n_neighbors > 0, "n_neighbors", "must be positive");
    require(sensor_range > 0.0, "sensor_range", "must be positive");
    require(max_wheel_velocity > 0.0, "max_wheel_velocity", "must be positive");
    require(sensitivity > 0.0, "sensitivity", "must be positive");
    require(time_step > 0.0, "time_step", "must be positive");
    require(duration > 0, "duration", "must be positive");
    require(max_retrieves > 0, "max_retrieves", "must be positive");
    require(rate_target_block >= 0.0 && rate_target_block <= 1.0, "rate_target_block", "must be in [0, 1]");
    require(!efficiency_reward, "efficiency_reward", "efficiency reward mode is not supported");
    require(!boxes_in_line, "boxes_in_line", "line placement mode is not supported");
    require(drop_zone_depth > 0.0 && drop_zone_depth < size, "drop_zone_depth", "must be in (0, size)");
    require(agent_separation >= 0.0, "agent_separation", "must be non-negative");
    require(wheel_offset > 0.0, "wheel_offset", "must be positive");
}

void TaskSpec::validate() const
{
    if (target >= palette.size() || other >= palette.size()) {
        throw ConfigError("task " + std::to_string(id) + ": colour outside the global colour set");
    }
    if (target == other) {
        throw ConfigError("task " + std::to_string(id) + ": target and other colour must differ");
    }
}

std::size_t color_index(const std::vector<std::string>& palette, std::string_view name)
{
    const auto it = std::find(palette.begin(), palette.end(), name);
    if (it == palette.end()) {
        throw ConfigError("colour '" + std::string(name) + "' is not in the global colour set");
    }
    return static_cast<std::size_t>(it - palette.begin());
}

TaskSpec make_task(int id, std::vector<std::string> palette, std::string_view target, std::string_view other)
{
    TaskSpec t;
    t.id = id;
    t.target = color_index(palette, target);
    t.other = color_index(palette, other);
    t.palette = std::move(palette);
    t.validate();
    return t;
}

} // namespace lswarm::arena
