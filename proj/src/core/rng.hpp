#ifndef SANA_CORE_RNG_HPP
#define SANA_CORE_RNG_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sana {

// Deterministic random stream. mt19937_64 output is fixed by the standard;
// all mappings to ranges are done here by hand so that draws are identical
// on every platform and every build.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t u64() { return engine_(); }

    // Uniform integer in [0, n), n > 0. Rejection sampling, bias-free.
    std::uint64_t below(std::uint64_t n);

    // Uniform integer in [lo, hi], inclusive.
    std::int64_t range(std::int64_t lo, std::int64_t hi);

    // Uniform double in [0, 1) with 53 random bits.
    double real01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return real01() < p; }

    // Index drawn proportionally to non-negative weights. Weights must not
    // all be zero.
    std::size_t weighted(std::span<const double> weights);

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(v.size()))];
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// One substream per draw domain, all derived from the master seed. Keeping
// adversary draws on their own stream makes the attack schedule identical
// across protection modes until the infection state itself diverges.
struct RngStreams {
    Rng init;
    Rng adversary;
    Rng cells;

    explicit RngStreams(std::uint64_t master)
        : init(splitmix64(master ^ 0x696e6974ULL)),
          adversary(splitmix64(master ^ 0x61647665ULL)),
          cells(splitmix64(master ^ 0x63656c6cULL)) {}
};

} // namespace sana

#endif
