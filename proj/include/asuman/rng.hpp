#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace asuman {

// Stateless 64-bit mixer; used to derive independent per-replication seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// seed for replication r of sweep point s, decorrelated from the base seed
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t sweep_index, std::uint64_t replication) {
    return base ^ mix64(sweep_index * 0x9e3779b97f4a7c15ULL + replication + 1);
}

// Event-stream generator owned by one run.  Uniform and exponential draws are
// inverse transforms over explicit 53-bit mantissas so a (config, seed) pair
// replays the same trace on any platform the engine is built for.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Exp(rate); rate > 0
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

    // uniform integer in [0, n); n > 0
    int pick(int n) {
        return static_cast<int>((static_cast<unsigned __int128>(eng_()) * static_cast<std::uint64_t>(n)) >> 64);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace asuman
