#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lswarm::arena {

/// Length unit of the simulator: one unit is one robot diameter, 250 mm.
inline constexpr double kMillimetresPerUnit = 250.0;

constexpr double units_to_mm(double units) noexcept { return units * kMillimetresPerUnit; }
constexpr double mm_to_units(double mm) noexcept { return mm / kMillimetresPerUnit; }

struct ArenaConfig {
    double size = 20.0; // 5 m
    std::size_t n_agents = 5;
    std::size_t n_boxes = 20;
    std::size_t n_neighbors = 3;
    double sensor_range = 4.0;       // 1 m
    double max_wheel_velocity = 2.0; // units/s, 50 cm/s
    double sensitivity = 0.5;        // pickup radius, 125 mm
    double time_step = 0.1;          // s
    std::size_t duration = 500;      // steps per episode
    std::size_t max_retrieves = 20;
    double rate_target_block = 0.5;
    bool repositioning = true;
    bool efficiency_reward = false;
    bool see_other_agents = false;
    bool boxes_in_line = false;

    double drop_zone_depth = 1.0;  // strip along the upper edge (y >= size - depth)
    double agent_separation = 1.0; // minimum start distance between agents
    double wheel_offset = 0.5;     // wheel distance from body centre

    /// Throws ConfigError naming the offending field.
    void validate() const;

    friend bool operator==(const ArenaConfig&, const ArenaConfig&) = default;
};

static_assert(units_to_mm(ArenaConfig{}.size) == 5000.0);
static_assert(units_to_mm(ArenaConfig{}.sensor_range) == 1000.0);
static_assert(units_to_mm(ArenaConfig{}.sensitivity) == 125.0);
static_assert(units_to_mm(ArenaConfig{}.max_wheel_velocity) == 500.0);

/// A foraging task: which of the palette's colours is collected and which
/// second colour shares the arena with it.
struct TaskSpec {
    int id = 0;
    std::vector<std::string> palette; // global colour set, fixed for a run
    std::size_t target = 0;
    std::size_t other = 1;

    [[nodiscard]] const std::string& name() const { return palette.at(target); }
    [[nodiscard]] std::size_t color_count() const noexcept { return palette.size(); }

    /// Throws ConfigError if a colour is outside the palette or target == other.
    void validate() const;

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

TaskSpec make_task(int id, std::vector<std::string> palette, std::string_view target, std::string_view other);

std::size_t color_index(const std::vector<std::string>& palette, std::string_view name);

} // namespace lswarm::arena
