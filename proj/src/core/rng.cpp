#include "core/rng.hpp"

#include <cassert>

namespace sana {

std::uint64_t Rng::below(std::uint64_t n) {
    assert(n > 0);
    if ((n & (n - 1)) == 0) {
        return u64() & (n - 1); // power of two
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = u64();
    while (v >= limit) {
        v = u64();
    }
    return v % n;
}

std::int64_t Rng::range(std::int64_t lo, std::int64_t hi) {
    assert(lo <= hi);
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
}

std::size_t Rng::weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
        total += w;
    }
    assert(total > 0.0);
    double r = real01() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        r -= weights[i];
        if (r < 0.0) {
            return i;
        }
    }
    return weights.size() - 1;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace sana
