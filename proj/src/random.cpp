#include "troppca/random.hpp"

#include <cmath>
#include <numeric>

#include "troppca/error.hpp"

namespace troppca {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw InvalidInput("Rng::below(0)");
    // Rejection sampling on the largest multiple of n.
    const std::uint64_t limit = -n % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t r = next();
        if (r >= limit) return r % n;
    }
}

double Rng::exponential(double rate) {
    if (!(rate > 0.0)) throw InvalidInput("exponential rate must be positive");
    return -std::log1p(-uniform()) / rate;
}

std::vector<std::size_t> Rng::sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw InvalidInput("cannot draw more items than available");
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace troppca
