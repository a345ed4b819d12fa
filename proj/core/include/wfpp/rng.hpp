#pragma once

#include <cmath>
#include <cstdint>

#include "wfpp/lattice.hpp"

namespace wfpp {

/// Counter-based uniform generator: every output is a pure function of
/// (seed, key, counter), so a draw attached to a lattice edge is reproducible
/// no matter in which order the simulation touches edges.  Three rounds of the
/// splitmix64 finalizer give full avalanche on the packed input.
inline std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t key, std::uint64_t counter) {
    std::uint64_t h = mix64(seed ^ 0xd6e8feb86659fd93ULL);
    h = mix64(h ^ key);
    h = mix64(h ^ counter);
    return h;
}

/// Uniform double in (0, 1); 53 mantissa bits, never exactly 0 or 1.
inline double uniform01_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t key, std::uint64_t counter) {
    return uniform01_from_bits(counter_bits(seed, key, counter));
}

/// Exp(rate) draw tied to (seed, key, counter).
inline double counter_exponential(std::uint64_t seed, std::uint64_t key, std::uint64_t counter,
                                  double rate) {
    return -std::log(counter_uniform(seed, key, counter)) / rate;
}

/// Key for the unique passage-time draw of a lattice edge.
inline std::uint64_t edge_rng_key(const Edge& e) { return edge_hash(e); }

/// Sequential stream on top of the counter generator, for consumers that just
/// need a reproducible sequence (growth chain, experiments, tests).
class CounterStream {
  public:
    explicit CounterStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_bits() { return counter_bits(seed_, stream_, counter_++); }
    double uniform() { return uniform01_from_bits(next_bits()); }
    double exponential(double rate) { return -std::log(uniform()) / rate; }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_bits() % n; }
    std::uint64_t draws() const { return counter_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

/// Derives statistically independent child seeds (replicate farms, resumes).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix64(mix64(seed ^ 0xa24baed4963ee407ULL) ^ salt);
}

}  // namespace wfpp
