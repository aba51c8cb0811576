#pragma once

// Seeded random number generation with platform-stable output. The standard
// distributions are implementation-defined, so all samplers here are built
// directly on top of the mt19937_64 bit stream; identical seeds give
// identical draws on every platform.

#include <cmath>
#include <cstdint>
#include <random>

namespace unlearn {

/// Deterministic child-seed derivation (splitmix64 over root xor counter).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    /// Standard normal via Box-Muller; the spare deviate is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.28318530717958647692 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    /// Laplace with the given scale (density exp(-|x|/scale) / (2 scale)).
    double laplace(double scale) {
        const double u = uniform() - 0.5;
        const double mag = std::log1p(-2.0 * std::abs(u)); // <= 0
        return u >= 0.0 ? -scale * mag : scale * mag;
    }

    /// Index in [0, n).
    std::uint64_t index(std::uint64_t n) {
        return gen_() % n;
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace unlearn
