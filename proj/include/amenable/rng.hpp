#pragma once

#include <cstdint>
#include <initializer_list>

namespace amenable {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stateless generator: every draw is a pure function of (seed, key words).
// Colorings and bond variables are evaluated lazily at any site this way.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

    constexpr std::uint64_t bits(std::initializer_list<std::int64_t> key) const noexcept {
        std::uint64_t h = mix64(seed_);
        for (auto k : key) h = mix64(h ^ static_cast<std::uint64_t>(k));
        return h;
    }

    // uniform in [0, 1) with 53 random bits
    constexpr double uniform(std::initializer_list<std::int64_t> key) const noexcept {
        return static_cast<double>(bits(key) >> 11) * 0x1.0p-53;
    }

    constexpr CounterRng derive(std::uint64_t stream) const noexcept {
        return CounterRng(mix64(seed_ ^ mix64(stream + 0x5851f42d4c957f2dULL)));
    }

    constexpr std::uint64_t seed() const noexcept { return seed_; }

private:
    std::uint64_t seed_;
};

}  // namespace amenable
