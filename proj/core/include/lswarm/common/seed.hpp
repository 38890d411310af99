#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lswarm {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Stable across platforms and compilers.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from an ordered list of components. Every random
/// stream in the engine is keyed this way, so results do not depend on
/// evaluation order or thread count.
constexpr std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept
{
    std::uint64_t h = 0x6a09e667f3bcc909ULL;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p));
    }
    return h;
}

/// Stream tags keep derived seeds of different purposes apart.
enum class Stream : std::uint64_t {
    init_population = 1,
    reproduce = 2,
    training_episode = 3,
    retention_episode = 4,
    eval_episode = 5,
};

constexpr std::uint64_t tag(Stream s) noexcept { return static_cast<std::uint64_t>(s); }

} // namespace lswarm
