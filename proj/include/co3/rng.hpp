#pragma once

#include <cstdint>

namespace co3 {

/// Deterministic random stream. All samplers are implemented explicitly on top
/// of xoshiro256** so that seeded runs produce identical values regardless of
/// the standard library in use. One Rng per logical stream; never shared
/// across threads.
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    /// Independent substream keyed on (seed, a, b); used to give every
    /// (round, user) pair its own deterministic generator.
    static Rng derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint64_t next_u64();

    /// Uniform on the open interval (0, 1).
    double uniform();

    /// Standard normal via Box-Muller.
    double normal();

    /// Gamma(shape, scale 1) via Marsaglia-Tsang; shape > 0.
    double gamma(double shape);

    /// Uniform sign in {-1.0, +1.0}.
    double sign();

  private:
    std::uint64_t s_[4];
};

}  // namespace co3
