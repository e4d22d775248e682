#include "compnovel/genetics.hpp"

#include <stdexcept>
#include <string>

namespace compnovel {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Comparator random_comparator(unsigned lines, Rng& rng)
{
    return pair_at(lines, uniform_index(rng, 0, pair_count(lines) - 1));
}

} // namespace

VariationParams VariationParams::resolved(unsigned lines) const
{
    VariationParams out = *this;
    if (out.init_min == 0) {
        out.init_min = std::min<std::size_t>(lines, out.max_comparators);
    }
    if (out.init_max == 0) {
        out.init_max = std::max(out.init_min, std::min<std::size_t>(3 * std::size_t{lines}, out.max_comparators));
    }
    return out;
}

void VariationParams::validate() const
{
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(crossover_prob)) {
        throw std::invalid_argument("crossover_prob must be in [0, 1]");
    }
    if (!prob_ok(mutation_prob)) {
        throw std::invalid_argument("mutation_prob must be in [0, 1]");
    }
    if (max_comparators == 0 || max_comparators > kMaxComparators) {
        throw std::invalid_argument("max_comparators must be in [1, 100]");
    }
    if (init_min != 0 || init_max != 0) {
        if (init_min == 0 || init_min > init_max || init_max > max_comparators) {
            throw std::invalid_argument("init_min/init_max must satisfy 0 < init_min <= init_max <= max_comparators");
        }
    }
}

Network random_network(unsigned lines, const VariationParams& params, Rng& rng)
{
    const auto p = params.resolved(lines);
    const std::size_t count = uniform_index(rng, p.init_min, p.init_max);
    std::vector<Comparator> comparators;
    comparators.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        comparators.push_back(random_comparator(lines, rng));
    }
    return Network(lines, std::move(comparators));
}

Network mutate(const Network& net, Mutation kind, const VariationParams& params, Rng& rng)
{
    std::vector<Comparator> seq = net.comparators();
    switch (kind) {
    case Mutation::Add:
        if (seq.size() < params.max_comparators) {
            const auto pos = uniform_index(rng, 0, seq.size());
            seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(pos), random_comparator(net.lines(), rng));
        }
        break;
    case Mutation::Remove:
        if (!seq.empty()) {
            seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(uniform_index(rng, 0, seq.size() - 1)));
        }
        break;
    case Mutation::Swap:
        if (seq.size() >= 2) {
            const auto i = uniform_index(rng, 0, seq.size() - 1);
            auto j = uniform_index(rng, 0, seq.size() - 2);
            if (j >= i) {
                ++j;
            }
            std::swap(seq[i], seq[j]);
        }
        break;
    }
    return Network(net.lines(), std::move(seq));
}

Network mutate(const Network& net, const VariationParams& params, Rng& rng)
{
    const auto kind = static_cast<Mutation>(uniform_index(rng, 0, 2));
    return mutate(net, kind, params, rng);
}

Network crossover_at(const Network& a, const Network& b, std::size_t cut_a, std::size_t cut_b,
                     std::size_t max_comparators)
{
    if (a.lines() != b.lines()) {
        throw std::invalid_argument("crossover parents have different line counts (" + std::to_string(a.lines()) +
                                    " vs " + std::to_string(b.lines()) + ")");
    }
    if (cut_a > a.size() || cut_b > b.size()) {
        throw std::out_of_range("crossover cut point out of range");
    }
    std::vector<Comparator> child(a.comparators().begin(), a.comparators().begin() + static_cast<std::ptrdiff_t>(cut_a));
    child.insert(child.end(), b.comparators().begin() + static_cast<std::ptrdiff_t>(cut_b), b.comparators().end());
    if (child.size() > max_comparators) {
        child.resize(max_comparators);
    }
    return Network(a.lines(), std::move(child));
}

Network crossover(const Network& a, const Network& b, Rng& rng, std::size_t max_comparators)
{
    if (a.lines() != b.lines()) {
        throw std::invalid_argument("crossover parents have different line counts (" + std::to_string(a.lines()) +
                                    " vs " + std::to_string(b.lines()) + ")");
    }
    const auto cut_a = uniform_index(rng, 0, a.size());
    const auto cut_b = uniform_index(rng, 0, b.size());
    return crossover_at(a, b, cut_a, cut_b, max_comparators);
}

Offspring make_offspring(std::span<const Network> pool, const VariationParams& params, Rng& rng)
{
    if (pool.empty()) {
        throw std::invalid_argument("make_offspring needs a non-empty parent pool");
    }
    std::bernoulli_distribution do_cross(params.crossover_prob);
    std::bernoulli_distribution do_mutate(params.mutation_prob);

    Offspring out;
    out.parent_a = uniform_index(rng, 0, pool.size() - 1);
    out.parent_b = uniform_index(rng, 0, pool.size() - 1);
    const Network& a = pool[out.parent_a];
    const Network& b = pool[out.parent_b];

    out.genome = do_cross(rng) ? crossover(a, b, rng, params.max_comparators) : a;
    if (do_mutate(rng)) {
        out.genome = mutate(out.genome, params, rng);
    }
    return out;
}

} // namespace compnovel
