#ifndef CSALLOC_RNG_HPP
#define CSALLOC_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace csalloc {

/// Seeded RNG with fully specified output. std::mt19937_64 is pinned by the
/// standard; the integer/real mappings are implemented here instead of
/// <random> distributions, whose algorithms are implementation-defined and
/// would break byte-for-byte reproducibility across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Unbiased draw from [0, bound) via rejection sampling.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53-bit resolution.
    double uniform_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 mix step; used to derive independent substream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Draw `count` distinct elements from `pool` uniformly without replacement
/// (partial Fisher-Yates). Result is sorted ascending.
std::vector<std::size_t> sample_without_replacement(const std::vector<std::size_t>& pool,
                                                    std::size_t count, Rng& rng);

} // namespace csalloc

#endif
