#include "lswarm/arena/arena.hpp"

#include "lswarm/common/error.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace lswarm::arena {

std::string_view to_string(EventKind kind) noexcept
{
    switch (kind) {
    case EventKind::pickup_target:
        return "pickup_target";
    case EventKind::pickup_wrong:
        return "pickup_wrong";
    case EventKind::delivery_target:
        return "delivery_target";
    case EventKind::delivery_wrong:
        return "delivery_wrong";
    }
    return "pickup_target";
}

EventKind parse_event_kind(std::string_view text)
{
    for (EventKind k : {EventKind::pickup_target, EventKind::pickup_wrong, EventKind::delivery_target,
                        EventKind::delivery_wrong}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    throw FormatError("unknown event '" + std::string(text) + "'");
}

namespace {

constexpr std::size_t kPlacementAttempts = 1000;

double distance(const Vec2& a, const Vec2& b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

struct Candidate {
    double distance;
    std::size_t type; // EntityType code or kColorBase + colour
    std::size_t index;
    Vec2 offset;
};

} // namespace

Arena::Arena(ArenaConfig config, TaskSpec task) : config_(config), pending_task_(task)
{
    config_.validate();
    task.validate();
    state_.task = std::move(task);
}

ObservationLayout Arena::layout() const noexcept { return {state_.task.color_count(), config_.n_neighbors}; }

bool Arena::done() const noexcept
{
    return state_.step >= config_.duration || state_.retrieves >= config_.max_retrieves;
}

bool Arena::in_drop_zone(const Vec2& p) const noexcept { return p.y >= config_.size - config_.drop_zone_depth; }

void Arena::change_task(const TaskSpec& task)
{
    task.validate();
    if (task.palette != state_.task.palette) {
        throw ConfigError("task " + std::to_string(task.id) + " uses a different global colour set");
    }
    pending_task_ = task;
}

void Arena::set_state(ArenaState state) { state_ = std::move(state); }

Vec2 Arena::random_free_position()
{
    std::uniform_real_distribution<double> ux(0.0, config_.size);
    std::uniform_real_distribution<double> uy(0.0, config_.size - config_.drop_zone_depth);
    const double x = ux(state_.rng);
    const double y = uy(state_.rng);
    return {x, y};
}

std::vector<Observation> Arena::reset(std::uint64_t episode_seed)
{
    state_.task = pending_task_;
    state_.rng.seed(episode_seed);
    state_.step = 0;
    state_.retrieves = 0;

    const auto n_target = static_cast<std::size_t>(
        std::llround(config_.rate_target_block * static_cast<double>(config_.n_boxes)));
    state_.boxes.assign(config_.n_boxes, Box{});
    for (std::size_t b = 0; b < config_.n_boxes; ++b) {
        Box& box = state_.boxes[b];
        box.color = b < n_target ? state_.task.target : state_.task.other;
        box.position = random_free_position();
    }

    state_.agents.assign(config_.n_agents, Agent{});
    std::uniform_real_distribution<double> heading(0.0, 2.0 * std::numbers::pi);
    for (std::size_t a = 0; a < config_.n_agents; ++a) {
        bool placed = false;
        for (std::size_t attempt = 0; attempt < kPlacementAttempts && !placed; ++attempt) {
            const Vec2 p = random_free_position();
            // Clear of other agents, and out of reach of every box so nothing is picked up without moving.
            placed = std::all_of(state_.agents.begin(), state_.agents.begin() + static_cast<std::ptrdiff_t>(a),
                                 [&](const Agent& o) { return distance(o.pose.position, p) >= config_.agent_separation; }) &&
                     std::all_of(state_.boxes.begin(), state_.boxes.end(),
                                 [&](const Box& b) { return distance(b.position, p) > config_.sensitivity; });
            if (placed) {
                state_.agents[a].pose.position = p;
            }
        }
        if (!placed) {
            throw ConfigError("n_agents: cannot place " + std::to_string(config_.n_agents) +
                              " agents apart; arena too crowded");
        }
        state_.agents[a].pose.heading = wrap_angle(heading(state_.rng));
    }
    return observe_all();
}

StepOutcome Arena::step(std::span<const WheelSpeeds> wheel_velocities)
{
    if (wheel_velocities.size() != state_.agents.size()) {
        throw ContractError("expected " + std::to_string(state_.agents.size()) + " wheel commands, got " +
                            std::to_string(wheel_velocities.size()));
    }
    if (done()) {
        throw ContractError("step called on a finished episode");
    }

    const double vmax = config_.max_wheel_velocity;
    for (std::size_t a = 0; a < state_.agents.size(); ++a) {
        WheelSpeeds w = wheel_velocities[a];
        for (double& v : w) {
            const double c = std::clamp(v, -vmax, vmax);
            if (c != v) {
                spdlog::debug("agent {} wheel velocity {} clamped to {}", a, v, c);
            }
            v = std::isnan(c) ? 0.0 : c;
        }
        Agent& agent = state_.agents[a];
        agent.pose = integrate(agent.pose, w, config_.time_step, config_.wheel_offset, config_.size);
        if (agent.carrying) {
            state_.boxes[*agent.carrying].position = agent.pose.position;
        }
    }

    StepOutcome out;
    for (std::size_t a = 0; a < state_.agents.size(); ++a) {
        Agent& agent = state_.agents[a];
        if (agent.carrying) {
            if (!in_drop_zone(agent.pose.position) || state_.retrieves >= config_.max_retrieves) {
                continue;
            }
            const std::size_t b = *agent.carrying;
            Box& box = state_.boxes[b];
            const EventKind kind =
                box.color == state_.task.target ? EventKind::delivery_target : EventKind::delivery_wrong;
            out.events.push_back({a, kind, b});
            ++state_.retrieves;
            agent.carrying.reset();
            box.carrier.reset();
            if (config_.repositioning) {
                box.status = BoxStatus::free;
                box.position = random_free_position();
            } else {
                box.status = BoxStatus::retrieved;
            }
            continue;
        }
        std::optional<std::size_t> nearest;
        double best = config_.sensitivity;
        for (std::size_t b = 0; b < state_.boxes.size(); ++b) {
            const Box& box = state_.boxes[b];
            if (box.status != BoxStatus::free) {
                continue;
            }
            const double d = distance(box.position, agent.pose.position);
            if (d <= best) {
                best = d;
                nearest = b;
            }
        }
        if (nearest) {
            Box& box = state_.boxes[*nearest];
            box.status = BoxStatus::carried;
            box.carrier = a;
            box.position = agent.pose.position;
            agent.carrying = *nearest;
            out.events.push_back(
                {a, box.color == state_.task.target ? EventKind::pickup_target : EventKind::pickup_wrong, *nearest});
        }
    }

    ++state_.step;
    for (const Event& e : out.events) {
        out.reward += reward_of(e.kind);
    }
    out.done = done();
    out.observations = observe_all();
    return out;
}

std::vector<Observation> Arena::observe_all() const
{
    std::vector<Observation> obs;
    obs.reserve(state_.agents.size());
    for (std::size_t a = 0; a < state_.agents.size(); ++a) {
        obs.push_back(observe(a));
    }
    return obs;
}

Observation Arena::observe(std::size_t agent_index) const
{
    const ObservationLayout L = layout();
    Observation obs(L.width(), 0.0);
    const Agent& self = state_.agents.at(agent_index);
    const Vec2 p = self.pose.position;
    const double range = config_.sensor_range;

    std::vector<Candidate> seen;
    for (std::size_t b = 0; b < state_.boxes.size(); ++b) {
        const Box& box = state_.boxes[b];
        if (box.status != BoxStatus::free) {
            continue;
        }
        const Vec2 off{box.position.x - p.x, box.position.y - p.y};
        const double d = std::hypot(off.x, off.y);
        if (d <= range) {
            seen.push_back({d, kColorBase + box.color, b, off});
        }
    }
    {
        // Nearest boundary point; ties resolved left, right, bottom, top.
        const std::array<Candidate, 4> walls{{
            {p.x, static_cast<std::size_t>(EntityType::wall), 0, {-p.x, 0.0}},
            {config_.size - p.x, static_cast<std::size_t>(EntityType::wall), 1, {config_.size - p.x, 0.0}},
            {p.y, static_cast<std::size_t>(EntityType::wall), 2, {0.0, -p.y}},
            {config_.size - p.y, static_cast<std::size_t>(EntityType::wall), 3, {0.0, config_.size - p.y}},
        }};
        const auto nearest = std::min_element(walls.begin(), walls.end(), [](const Candidate& a, const Candidate& b) {
            return a.distance < b.distance;
        });
        if (nearest->distance <= range) {
            seen.push_back(*nearest);
        }
    }
    if (config_.see_other_agents) {
        for (std::size_t a = 0; a < state_.agents.size(); ++a) {
            if (a == agent_index) {
                continue;
            }
            const Vec2 q = state_.agents[a].pose.position;
            const Vec2 off{q.x - p.x, q.y - p.y};
            const double d = std::hypot(off.x, off.y);
            if (d <= range) {
                seen.push_back({d, static_cast<std::size_t>(EntityType::agent), a, off});
            }
        }
    }
    std::sort(seen.begin(), seen.end(), [](const Candidate& a, const Candidate& b) {
        if (a.distance != b.distance) {
            return a.distance < b.distance;
        }
        return a.type != b.type ? a.type < b.type : a.index < b.index;
    });

    for (std::size_t slot = 0; slot < L.neighbors; ++slot) {
        const std::size_t dir = L.direction_offset() + 2 * slot;
        if (slot >= seen.size()) {
            obs[L.type_offset(slot) + static_cast<std::size_t>(EntityType::none)] = 1.0;
            obs[dir] = 0.5;
            obs[dir + 1] = 0.5;
            continue;
        }
        const Candidate& c = seen[slot];
        obs[L.type_offset(slot) + c.type] = 1.0;
        obs[L.distance_offset() + slot] = c.distance / range;
        const double bearing = std::atan2(c.offset.y, c.offset.x) - self.pose.heading;
        obs[dir] = (std::sin(bearing) + 1.0) / 2.0;
        obs[dir + 1] = (std::cos(bearing) + 1.0) / 2.0;
    }
    obs[L.heading_offset()] = (std::sin(self.pose.heading) + 1.0) / 2.0;
    obs[L.heading_offset() + 1] = (std::cos(self.pose.heading) + 1.0) / 2.0;
    const std::size_t carried = self.carrying ? 1 + state_.boxes[*self.carrying].color : 0;
    obs[L.carrying_offset() + carried] = 1.0;
    obs[L.target_offset() + state_.task.target] = 1.0;
    return obs;
}

} // namespace lswarm::arena
