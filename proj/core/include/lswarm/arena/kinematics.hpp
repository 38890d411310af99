#pragma once

#include <array>

namespace lswarm::arena {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Pose {
    Vec2 position;
    double heading = 0.0; // radians in [0, 2pi)

    friend bool operator==(const Pose&, const Pose&) = default;
};

/// Body-frame velocity: forward (x), lateral (y), yaw rate.
struct Twist {
    double vx = 0.0;
    double vy = 0.0;
    double omega = 0.0;
};

using WheelSpeeds = std::array<double, 3>;

/// Three omni wheels mounted tangentially at body angles 0, 120 and 240
/// degrees, `wheel_offset` from the centre. Wheel i rolls at
/// -sin(a_i) vx + cos(a_i) vy + offset * omega; this inverts that map.
Twist body_twist(const WheelSpeeds& wheels, double wheel_offset) noexcept;

/// One explicit Euler step in the world frame using the current heading.
/// The position is clamped to [0, size]^2 and the heading wrapped to [0, 2pi).
Pose integrate(const Pose& pose, const WheelSpeeds& wheels, double dt, double wheel_offset, double size) noexcept;

double wrap_angle(double a) noexcept;

} // namespace lswarm::arena
