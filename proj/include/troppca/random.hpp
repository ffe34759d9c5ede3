#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace troppca {

/// Seeded stream over std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Distributions are implemented here rather than taken from
/// <random>, whose algorithms vary between standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n), unbiased. n must be positive.
    std::uint64_t below(std::uint64_t n);

    /// +1 or -1 with equal probability.
    int sign() { return (next() >> 63) ? 1 : -1; }

    /// Exponential variate by inverse CDF.
    double exponential(double rate);

    /// k distinct values from [0, n) in draw order (partial Fisher-Yates).
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace troppca
