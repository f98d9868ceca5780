#include "csalloc/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace csalloc {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<std::size_t> sample_without_replacement(const std::vector<std::size_t>& pool,
                                                    std::size_t count, Rng& rng) {
    if (count > pool.size())
        throw std::invalid_argument("sample_without_replacement: count exceeds pool size");
    std::vector<std::size_t> scratch = pool;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(scratch.size() - i));
        std::swap(scratch[i], scratch[j]);
    }
    scratch.resize(count);
    std::sort(scratch.begin(), scratch.end());
    return scratch;
}

} // namespace csalloc
