#include "lswarm/arena/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lswarm::arena {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// sin/cos of the wheel mounting angles 0, 120, 240 degrees.
constexpr std::array<double, 3> kSin{0.0, 0.86602540378443864676, -0.86602540378443864676};
constexpr std::array<double, 3> kCos{1.0, -0.5, -0.5};

} // namespace

Twist body_twist(const WheelSpeeds& w, double wheel_offset) noexcept
{
    // J^T J = diag(3/2, 3/2, 3 R^2), so the inverse is a scaled transpose.
    Twist t;
    for (std::size_t i = 0; i < 3; ++i) {
        t.vx += -kSin[i] * w[i];
        t.vy += kCos[i] * w[i];
        t.omega += w[i];
    }
    t.vx *= 2.0 / 3.0;
    t.vy *= 2.0 / 3.0;
    t.omega /= 3.0 * wheel_offset;
    return t;
}

double wrap_angle(double a) noexcept
{
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) {
        a += kTwoPi;
    }
    return a >= kTwoPi ? 0.0 : a;
}

Pose integrate(const Pose& pose, const WheelSpeeds& wheels, double dt, double wheel_offset, double size) noexcept
{
    const Twist t = body_twist(wheels, wheel_offset);
    const double c = std::cos(pose.heading);
    const double s = std::sin(pose.heading);
    Pose out;
    out.position.x = std::clamp(pose.position.x + dt * (c * t.vx - s * t.vy), 0.0, size);
    out.position.y = std::clamp(pose.position.y + dt * (s * t.vx + c * t.vy), 0.0, size);
    out.heading = wrap_angle(pose.heading + dt * t.omega);
    return out;
}

} // namespace lswarm::arena
