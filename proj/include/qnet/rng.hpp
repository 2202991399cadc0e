#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace qnet {

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Splittable seed derivation: a master seed plus a list of structural
// indices (realization, perturbation slot, grid position, ...) maps to an
// independent stream seed. Deterministic regardless of evaluation order,
// which keeps ensemble output identical for any worker count.
template <typename... Keys>
std::uint64_t derive_seed(std::uint64_t master, Keys... keys) {
    std::uint64_t h = mix64(master + 0x9E3779B97F4A7C15ULL);
    ((h = mix64(h ^ (static_cast<std::uint64_t>(keys) + 0x9E3779B97F4A7C15ULL +
                     (h << 6) + (h >> 2)))),
     ...);
    return h;
}

// Thin deterministic wrapper around mt19937_64. Variate generation is done
// locally (not via std distributions) so that streams are reproducible
// byte-for-byte across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Unbiased integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t x, r;
        do {
            x = next_u64();
            r = x % n;
        } while (x - r > ~std::uint64_t{0} - (n - 1));
        return r;
    }

    // Fisher-Yates on the first k slots; v[0..k) ends up a uniform
    // k-subset of v in uniform random order.
    template <typename T>
    void partial_shuffle(std::vector<T>& v, std::size_t k) {
        const std::size_t n = v.size();
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(n - i));
            std::swap(v[i], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qnet
