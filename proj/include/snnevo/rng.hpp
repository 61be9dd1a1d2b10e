#ifndef SNNEVO_RNG_HPP
#define SNNEVO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace snnevo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stateless seed derivation: the same (base, parts...) always maps to the
/// same child seed, so parallel evaluations stay reproducible.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : parts) h = splitmix64(h ^ p);
    return h;
}

/// mt19937_64 with explicit distribution helpers. The standard distributions
/// are implementation-defined, so we roll our own to keep runs byte-stable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t raw() { return eng_(); }

    // uniform in [0, 1)
    double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // uniform integer in [0, n), n > 0
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do {
            r = eng_();
        } while (r >= limit);
        return r % n;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(n)); }

    bool chance(double p) { return uniform01() < p; }

    double normal(double mu, double sigma) {
        // Box-Muller, no caching so the draw count stays predictable
        double u1 = 1.0 - uniform01();
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
        return mu + sigma * z;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace snnevo

#endif
