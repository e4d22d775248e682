#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "compnovel/network.hpp"

namespace compnovel {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent, schedule-free rng substreams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Rng for (seed, stream, index); e.g. stream = generation, index = offspring slot.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
{
    return Rng(mix64(mix64(mix64(seed) ^ stream) ^ (index * 0xD1B54A32D192ED03ULL)));
}

struct VariationParams {
    double crossover_prob = 1.0;
    double mutation_prob = 0.9;
    /// 0 means "derive from line count" (n and 3n).
    std::size_t init_min = 0;
    std::size_t init_max = 0;
    std::size_t max_comparators = kMaxComparators;

    /// Fills init bounds from the line count when unset.
    VariationParams resolved(unsigned lines) const;
    void validate() const;
};

enum class Mutation { Add, Remove, Swap };

Network random_network(unsigned lines, const VariationParams& params, Rng& rng);

/// One uniformly chosen mutation (add, remove or swap). Degenerate cases are no-ops.
Network mutate(const Network& net, const VariationParams& params, Rng& rng);
Network mutate(const Network& net, Mutation kind, const VariationParams& params, Rng& rng);

/// Single-point crossover with independent cuts: a[0, i) ++ b[j, end).
Network crossover(const Network& a, const Network& b, Rng& rng, std::size_t max_comparators = kMaxComparators);
Network crossover_at(const Network& a, const Network& b, std::size_t cut_a, std::size_t cut_b,
                     std::size_t max_comparators = kMaxComparators);

struct Offspring {
    Network genome;
    std::size_t parent_a = 0; ///< index into the pool
    std::size_t parent_b = 0;
};

Offspring make_offspring(std::span<const Network> pool, const VariationParams& params, Rng& rng);

} // namespace compnovel
