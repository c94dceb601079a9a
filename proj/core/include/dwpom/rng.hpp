#pragma once

#include <array>
#include <cstdint>
#include <cmath>
#include <numeric>
#include <vector>

namespace dwpom {

// Deterministic random stream. Distribution transforms are written out
// explicitly (rather than via std::*_distribution) so that identical seeds
// produce identical draws on any standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed == 0 ? 0x9e3779b97f4a7c15ULL : seed) {
        // warm-up to decorrelate near-zero seeds
        for (int i = 0; i < 8; ++i) next_u64();
    }

    // Substream for replicate `index` of a run with base seed `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(mix(mix(seed) ^ mix(index + 0x632be59bd9b4e019ULL)));
    }

    std::uint64_t next_u64() {
        // xorshift* fed by a splitmix-updated counter
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1); never returns an exact endpoint.
    double uniform() {
        const std::uint64_t r = next_u64() >> 11;  // 53 bits
        return (static_cast<double>(r) + 0.5) * 0x1.0p-53;
    }

    double normal(double mean = 0.0, double sd = 1.0) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
        return mean + sd * z;
    }

    int bernoulli(double p) { return uniform() < p ? 1 : 0; }

    // Index in [0, probs.size()) with the given (normalized) probabilities.
    int categorical(const double* probs, int k) {
        double u = uniform();
        for (int c = 0; c < k - 1; ++c) {
            u -= probs[c];
            if (u < 0.0) return c;
        }
        return k - 1;
    }

    // Fisher-Yates permutation of 0..n-1.
    std::vector<int> permutation(int n) {
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(next_u64() % static_cast<std::uint64_t>(i + 1));
            std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        }
        return idx;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

}  // namespace dwpom
