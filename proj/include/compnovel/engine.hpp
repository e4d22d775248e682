#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "compnovel/genetics.hpp"
#include "compnovel/network.hpp"
#include "compnovel/novelty.hpp"
#include "compnovel/objectives.hpp"

namespace compnovel {

/// Invalid configuration value; key() names the offending `section.key`.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key + ": " + message), key_(std::move(key))
    {
    }
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

std::string_view method_name(MethodKind method);
/// Accepts so, mo, cmo, cmo-novelty (and the long enum-style names).
MethodKind parse_method(std::string_view name);

struct RunConfig {
    MethodKind method = MethodKind::CompositeNovelty;
    unsigned lines = 8;
    std::size_t population_size = 1000;
    std::size_t generations = 1000;
    double elite_fraction = 0.10;
    std::uint64_t seed = 1;
    /// Evaluation threads; results do not depend on it.
    unsigned workers = 1;
    VariationParams variation;
    CompositeWeights weights;
    NoveltyConfig novelty;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
    std::size_t elite_count() const;
};

struct Individual {
    std::uint64_t id = 0;
    Network genome;
    Evaluation eval;
    ObjectiveVector objectives;
    /// Ids of the two parents; absent for the initial population.
    std::optional<std::pair<std::uint64_t, std::uint64_t>> parents;
};

struct GenerationRecord {
    std::size_t generation = 0;
    double best_fitness = 0;
    std::uint64_t min_mistakes = 0;
    std::optional<std::uint32_t> best_c_correct;
    std::optional<std::uint32_t> best_l_correct;
    double elite_diversity = 0;

    friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

struct BestCorrect {
    Individual min_comparators;
    Individual min_layers;
};

/// Correct individual with fewest comparators (ties: fewer layers, lower id)
/// and the one with fewest layers (ties: fewer comparators, lower id).
std::optional<BestCorrect> best_correct(const std::vector<Individual>& population);

struct RunResult {
    std::vector<GenerationRecord> records;
    /// Best correct networks seen at any generation.
    std::optional<BestCorrect> best;
    std::optional<std::size_t> first_correct_generation;
    double wall_clock_seconds = 0;
    std::uint64_t seed = 0;
};

class EvaluationCache {
public:
    explicit EvaluationCache(std::size_t capacity = 1 << 19) : capacity_(capacity) {}

    /// Evaluates every genome, reusing memoized results; uncached genomes are
    /// spread over `workers` threads.
    std::vector<Evaluation> evaluate_all(const std::vector<Network>& genomes, unsigned workers);

    std::size_t size() const noexcept { return memo_.size(); }

private:
    std::size_t capacity_;
    std::unordered_map<Network, Evaluation, NetworkHash> memo_;
};

struct PopulationState {
    std::size_t generation = 0;
    std::uint64_t next_id = 0;
    std::vector<Individual> population;
    EvaluationCache cache;
};

/// Random initial population, evaluated.
PopulationState initialize(const RunConfig& config);

/// Parent pool as population indices, in pool order. Always contains the
/// individual with the lowest single fitness.
std::vector<std::size_t> select_parents(const std::vector<Individual>& population, const RunConfig& config);

/// Breeds population_size - E offspring from `pool` and forms the next
/// generation: pool members unchanged, then offspring. Rng substreams are
/// derived from (seed, next generation, offspring slot).
void advance(PopulationState& state, const std::vector<std::size_t>& pool, const RunConfig& config);

/// select_parents + advance.
void step_generation(PopulationState& state, const RunConfig& config);

GenerationRecord record_generation(const PopulationState& state, const std::vector<std::size_t>& pool,
                                   const RunConfig& config);

RunResult run(const RunConfig& config);

void write_run_csv(std::ostream& os, const RunResult& result);
std::string run_csv(const RunResult& result);

/// Shortest round-trip decimal form; integral values print without a fraction.
std::string format_number(double value);

} // namespace compnovel
