#pragma once

#include "lswarm/arena/config.hpp"
#include "lswarm/arena/kinematics.hpp"
#include "lswarm/common/seed.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lswarm::arena {

using Observation = std::vector<double>;

/// Entity type codes of a neighbour slot; colour k is kColorBase + k.
enum class EntityType : std::size_t { none = 0, wall = 1, agent = 2 };
inline constexpr std::size_t kColorBase = 3;

/// Offsets of the controller's input groups.
///
/// Order: neighbour types (n slots of c+3 one-hot), neighbour distances (n),
/// neighbour directions (n sin/cos pairs), heading (sin, cos), carried
/// colour (c+1 one-hot, "none" first), target colour (c one-hot).
struct ObservationLayout {
    std::size_t colors = 4;
    std::size_t neighbors = 3;

    [[nodiscard]] constexpr std::size_t type_width() const noexcept { return colors + 3; }
    [[nodiscard]] constexpr std::size_t type_offset(std::size_t slot) const noexcept { return slot * type_width(); }
    [[nodiscard]] constexpr std::size_t distance_offset() const noexcept { return neighbors * type_width(); }
    [[nodiscard]] constexpr std::size_t direction_offset() const noexcept { return distance_offset() + neighbors; }
    [[nodiscard]] constexpr std::size_t heading_offset() const noexcept { return direction_offset() + 2 * neighbors; }
    [[nodiscard]] constexpr std::size_t carrying_offset() const noexcept { return heading_offset() + 2; }
    [[nodiscard]] constexpr std::size_t target_offset() const noexcept { return carrying_offset() + colors + 1; }
    [[nodiscard]] constexpr std::size_t width() const noexcept { return target_offset() + colors; }
};

constexpr std::size_t observation_width(std::size_t colors, std::size_t neighbors) noexcept
{
    return ObservationLayout{colors, neighbors}.width();
}

enum class BoxStatus { free, carried, retrieved };

struct Box {
    Vec2 position;
    std::size_t color = 0;
    BoxStatus status = BoxStatus::free;
    std::optional<std::size_t> carrier;
};

struct Agent {
    Pose pose;
    std::optional<std::size_t> carrying; // box index
};

enum class EventKind { pickup_target, pickup_wrong, delivery_target, delivery_wrong };

std::string_view to_string(EventKind kind) noexcept;
EventKind parse_event_kind(std::string_view text);

/// +1 target pickup, -1 wrong pickup, +2 target delivery, 0 wrong delivery.
constexpr int reward_of(EventKind kind) noexcept
{
    switch (kind) {
    case EventKind::pickup_target:
        return 1;
    case EventKind::pickup_wrong:
        return -1;
    case EventKind::delivery_target:
        return 2;
    case EventKind::delivery_wrong:
        return 0;
    }
    return 0;
}

struct Event {
    std::size_t agent = 0;
    EventKind kind = EventKind::pickup_target;
    std::size_t box = 0;
};

struct ArenaState {
    TaskSpec task;
    std::vector<Agent> agents;
    std::vector<Box> boxes;
    std::size_t step = 0;
    std::size_t retrieves = 0;
    Rng rng;
};

struct StepOutcome {
    std::vector<Observation> observations;
    int reward = 0;
    std::vector<Event> events;
    bool done = false;
};

/// Episodic swarm-foraging simulator. Single-threaded; independent
/// instances share nothing.
class Arena {
public:
    Arena(ArenaConfig config, TaskSpec task);

    /// Starts a new episode; applies a pending change_task first.
    /// Throws ConfigError if agents cannot be placed apart.
    std::vector<Observation> reset(std::uint64_t episode_seed);

    /// Advances one time step. Velocities outside [-v_max, v_max] are
    /// clamped. Throws ContractError on a wrong action count or after done.
    StepOutcome step(std::span<const WheelSpeeds> wheel_velocities);

    /// Takes effect at the next reset.
    void change_task(const TaskSpec& task);

    [[nodiscard]] Observation observe(std::size_t agent) const;
    [[nodiscard]] std::vector<Observation> observe_all() const;

    [[nodiscard]] const ArenaConfig& config() const noexcept { return config_; }
    [[nodiscard]] const TaskSpec& task() const noexcept { return state_.task; }
    [[nodiscard]] const TaskSpec& pending_task() const noexcept { return pending_task_; }
    [[nodiscard]] const ArenaState& state() const noexcept { return state_; }
    [[nodiscard]] ObservationLayout layout() const noexcept;
    [[nodiscard]] std::size_t observation_width() const noexcept { return layout().width(); }
    [[nodiscard]] bool done() const noexcept;
    [[nodiscard]] bool in_drop_zone(const Vec2& p) const noexcept;

    /// Replaces the whole state; used to build scenarios in tests.
    void set_state(ArenaState state);

private:
    Vec2 random_free_position();

    ArenaConfig config_;
    TaskSpec pending_task_;
    ArenaState state_;
};

} // namespace lswarm::arena
