#include "utf/rng.hpp"

#include <cmath>
#include <numbers>

namespace utf {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {
// splitmix64 finalizer; decorrelates derived seeds from the root.
std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace

int Rng::uniform_int(int lo, int hi) {
    // hi - lo + 1 is tiny everywhere this is used; modulo bias is negligible
    // but we keep it exact anyway via rejection on the top 32 bits.
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = (~0ull / span) * span;
    std::uint64_t x = eng_();
    while (x >= limit) x = eng_();
    return lo + static_cast<int>(x % span);
}

Complex Rng::unit_phase() {
    const double t = uniform(0.0, 2.0 * std::numbers::pi);
    return Complex(std::cos(t), std::sin(t));
}

Complex Rng::gaussian() {
    // Box-Muller from two raw-bit uniforms; u kept away from 0.
    const double u = 1.0 - uniform01();
    const double v = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(-2.0 * std::log(u));
    return Complex(r * std::cos(v), r * std::sin(v)) / std::sqrt(2.0);
}

Complex Rng::annulus(double rmin, double rmax) {
    return uniform(rmin, rmax) * unit_phase();
}

Rng Rng::derive(std::string_view name) const { return Rng(mix(seed_ ^ fnv1a64(name))); }

}  // namespace utf
