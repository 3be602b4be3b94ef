#pragma once

#include <cmath>
#include <cstdint>

namespace resolvex {

// Counter-based generator: out = mix(seed, counter). Any draw is addressable
// by its index, so results do not depend on thread scheduling or call order.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t bits(std::uint64_t counter) const {
        std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (counter + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo,hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    // Standard normal via Box-Muller; consumes counters 2k and 2k+1.
    double gaussian(std::uint64_t pair_index) const {
        double u1 = uniform(2 * pair_index);
        double u2 = uniform(2 * pair_index + 1);
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::uint64_t integer(std::uint64_t counter, std::uint64_t n) const {
        return bits(counter) % n;  // n is tiny everywhere we use this
    }

    // Derive an independent stream (e.g. one per trial).
    CounterRng stream(std::uint64_t sub) const { return CounterRng(bits(0xABCD0000u + sub)); }

private:
    std::uint64_t seed_;
};

// Stateful convenience wrapper over CounterRng for sequential generation.
class SequentialRng {
public:
    explicit SequentialRng(std::uint64_t seed) : rng_(seed) {}
    double uniform() { return rng_.uniform(next_++); }
    double uniform(double lo, double hi) { return rng_.uniform(next_++, lo, hi); }
    double gaussian() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }
    std::uint64_t integer(std::uint64_t n) { return rng_.integer(next_++, n); }

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

} // namespace resolvex
