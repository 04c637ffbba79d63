#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace wdro {

/// Deterministic random source. std::mt19937_64 has a fully specified output
/// sequence; the distribution helpers here are hand-rolled because the
/// standard <random> distributions are implementation-defined and the
/// experiment runner promises byte-identical outputs for a given seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform index in [0, n), n >= 1.
    std::size_t uniform_index(std::size_t n) {
        // Rejection-free scaling; bias is negligible for desk-scale n.
        return static_cast<std::size_t>(uniform01() * static_cast<double>(n)) % n;
    }

    /// Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Fisher-Yates shuffle of 0..n-1.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(idx[i - 1], idx[j]);
        }
        return idx;
    }

    /// k distinct indices from [0, n), uniform without replacement.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx = permutation(n);
        idx.resize(k);
        return idx;
    }

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 step; used to derive independent seed streams.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t s1, std::uint64_t s2) {
    return derive_seed(derive_seed(master, s1), s2);
}

}  // namespace wdro
