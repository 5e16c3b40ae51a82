#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "utf/matrix.hpp"

namespace utf {

std::uint64_t fnv1a64(std::string_view bytes);

// Deterministic random source.  std::mt19937_64 output is fully specified by
// the standard; doubles are extracted from raw bits rather than through
// std::uniform_real_distribution (whose algorithm is implementation-defined),
// so a seed pins every generated instance byte-for-byte.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform01() {  // [0, 1) with 53-bit resolution
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi);  // inclusive bounds

    Complex unit_phase();
    Complex gaussian();  // standard complex gaussian (Box-Muller)
    // Uniform modulus in [rmin, rmax], uniform phase.
    Complex annulus(double rmin, double rmax);

    // Independent substream keyed by the consumer's name, derived from the
    // root seed.  Adding a consumer never shifts the draws seen by another.
    Rng derive(std::string_view name) const;

  private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace utf
