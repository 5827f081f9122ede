#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace cmlaws {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Derives an independent stream seed from (master, experiment id, trial index),
/// so parallel trials never share a stream and reruns are reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view experiment_id,
                                 std::uint64_t trial) {
    std::uint64_t s = master;
    splitmix64(s);
    s ^= fnv1a64(experiment_id);
    splitmix64(s);
    s ^= trial;
    return splitmix64(s);
}

/// Seeded random stream. Integer draws use rejection sampling on mt19937_64
/// output rather than std::uniform_int_distribution, which is not specified
/// bit-exactly across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    /// Uniform integer in [0, n). Unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Poisson draw by CDF inversion; intended for small means.
    int poisson(double mean) {
        if (mean <= 0.0) return 0;
        double u = u01();
        double p = std::exp(-mean);
        double cum = p;
        int k = 0;
        while (u > cum && k < 1'000'000) {
            ++k;
            p *= mean / k;
            cum += p;
        }
        return k;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace cmlaws
