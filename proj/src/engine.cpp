#include "compnovel/engine.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "compnovel/moea.hpp"

namespace compnovel {

std::string_view method_name(MethodKind method)
{
    switch (method) {
    case MethodKind::SingleObjective:
        return "so";
    case MethodKind::MultiObjective:
        return "mo";
    case MethodKind::CompositeMultiObjective:
        return "cmo";
    case MethodKind::CompositeNovelty:
        return "cmo-novelty";
    }
    return "?";
}

MethodKind parse_method(std::string_view name)
{
    if (name == "so" || name == "single" || name == "SingleObjective") {
        return MethodKind::SingleObjective;
    }
    if (name == "mo" || name == "multi" || name == "MultiObjective") {
        return MethodKind::MultiObjective;
    }
    if (name == "cmo" || name == "composite" || name == "CompositeMultiObjective") {
        return MethodKind::CompositeMultiObjective;
    }
    if (name == "cmo-novelty" || name == "cmo_novelty" || name == "novelty" || name == "CompositeNovelty") {
        return MethodKind::CompositeNovelty;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected so, mo, cmo, cmo-novelty)");
}

std::size_t RunConfig::elite_count() const
{
    return static_cast<std::size_t>(std::floor(elite_fraction * static_cast<double>(population_size) + 0.5));
}

void RunConfig::validate() const
{
    if (lines < 2 || lines > kMaxLines) {
        throw ConfigError("run.lines", "must be in [2, 32]");
    }
    if (population_size < 10) {
        throw ConfigError("run.population_size", "must be at least 10");
    }
    if (!(elite_fraction > 0.0 && elite_fraction <= 0.5)) {
        throw ConfigError("selection.elite_fraction", "must be in (0, 0.5]");
    }
    if (elite_count() < 1) {
        throw ConfigError("selection.elite_fraction", "selects no elites at this population size");
    }
    if (workers < 1) {
        throw ConfigError("run.workers", "must be at least 1");
    }
    try {
        variation.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto key = msg.substr(0, msg.find_first_of(" /"));
        throw ConfigError("variation." + key, msg);
    }
    try {
        weights.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("objectives.alpha", e.what());
    }
    try {
        novelty.validate(elite_fraction);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("novelty.selection_multiplier", e.what());
    }
    if (method == MethodKind::CompositeNovelty &&
        broadened_size(elite_count(), novelty.selection_multiplier) > population_size) {
        throw ConfigError("novelty.selection_multiplier", "broadened pool exceeds population");
    }
}

std::optional<BestCorrect> best_correct(const std::vector<Individual>& population)
{
    const Individual* by_c = nullptr;
    const Individual* by_l = nullptr;
    for (const auto& ind : population) {
        if (ind.eval.mistakes != 0) {
            continue;
        }
        const auto& e = ind.eval;
        if (!by_c || std::tie(e.comparators, e.layers, ind.id) <
                         std::tie(by_c->eval.comparators, by_c->eval.layers, by_c->id)) {
            by_c = &ind;
        }
        if (!by_l || std::tie(e.layers, e.comparators, ind.id) <
                         std::tie(by_l->eval.layers, by_l->eval.comparators, by_l->id)) {
            by_l = &ind;
        }
    }
    if (!by_c) {
        return std::nullopt;
    }
    return BestCorrect{*by_c, *by_l};
}

std::vector<Evaluation> EvaluationCache::evaluate_all(const std::vector<Network>& genomes, unsigned workers)
{
    std::vector<Evaluation> out(genomes.size());
    std::vector<std::size_t> pending;
    std::unordered_map<Network, std::size_t, NetworkHash> first_seen;
    std::vector<std::size_t> alias(genomes.size());
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        if (auto it = memo_.find(genomes[i]); it != memo_.end()) {
            out[i] = it->second;
            alias[i] = i;
            continue;
        }
        auto [it, inserted] = first_seen.try_emplace(genomes[i], i);
        alias[i] = it->second;
        if (inserted) {
            pending.push_back(i);
        }
    }

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            out[pending[k]] = evaluate(genomes[pending[k]]);
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(workers, 1U), pending.size());
    if (threads <= 1) {
        work(0, pending.size());
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (pending.size() + threads - 1) / threads;
        for (std::size_t t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(pending.size(), begin + chunk);
            if (begin < end) {
                pool.emplace_back(work, begin, end);
            }
        }
    }

    if (memo_.size() + pending.size() > capacity_) {
        memo_.clear();
    }
    for (auto i : pending) {
        memo_.emplace(genomes[i], out[i]);
    }
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        if (alias[i] != i) {
            out[i] = out[alias[i]];
        }
    }
    return out;
}

namespace {

Individual make_individual(std::uint64_t id, Network genome, Evaluation eval, const RunConfig& config)
{
    Individual ind;
    ind.id = id;
    ind.objectives = objectives_for(config.method, eval, config.weights);
    ind.genome = std::move(genome);
    ind.eval = std::move(eval);
    return ind;
}

std::size_t champion(const std::vector<Individual>& population)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < population.size(); ++i) {
        const double fi = single_fitness(population[i].eval);
        const double fb = single_fitness(population[best].eval);
        if (fi < fb || (fi == fb && population[i].id < population[best].id)) {
            best = i;
        }
    }
    return best;
}

constexpr std::uint64_t kInitStream = 0;

} // namespace

PopulationState initialize(const RunConfig& config)
{
    config.validate();
    const auto params = config.variation.resolved(config.lines);
    PopulationState state;
    std::vector<Network> genomes;
    genomes.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        Rng rng = substream(config.seed, kInitStream, i);
        genomes.push_back(random_network(config.lines, params, rng));
    }
    auto evals = state.cache.evaluate_all(genomes, config.workers);
    state.population.reserve(config.population_size);
    for (std::size_t i = 0; i < genomes.size(); ++i) {
        state.population.push_back(make_individual(state.next_id++, std::move(genomes[i]), std::move(evals[i]), config));
    }
    return state;
}

std::vector<std::size_t> select_parents(const std::vector<Individual>& population, const RunConfig& config)
{
    const std::size_t size = population.size();
    const std::size_t elites = config.elite_count();
    const Eigen::Index dims = objective_count(config.method);

    ObjectiveMatrix points(static_cast<Eigen::Index>(size), dims);
    std::vector<std::uint64_t> ids(size);
    for (std::size_t i = 0; i < size; ++i) {
        points.row(static_cast<Eigen::Index>(i)) = population[i].objectives.transpose();
        ids[i] = population[i].id;
    }
    const auto order = selection_order(rank_population(points, ids));

    std::vector<std::size_t> pool;
    pool.reserve(elites);
    if (config.method == MethodKind::CompositeNovelty) {
        const std::size_t broad = std::min(size, broadened_size(elites, config.novelty.selection_multiplier));
        BehaviorMatrix behaviors(static_cast<Eigen::Index>(broad), static_cast<Eigen::Index>(config.lines));
        std::vector<std::uint64_t> broad_ids(broad);
        for (std::size_t r = 0; r < broad; ++r) {
            const auto& ind = population[order[r].index];
            for (unsigned j = 0; j < config.lines; ++j) {
                behaviors(static_cast<Eigen::Index>(r), j) = static_cast<double>(ind.eval.behavior[j]);
            }
            broad_ids[r] = ind.id;
        }
        for (auto pos : novelty_select(behaviors, broad_ids, elites, config.novelty)) {
            pool.push_back(order[pos].index);
        }
    } else {
        for (std::size_t r = 0; r < elites; ++r) {
            pool.push_back(order[r].index);
        }
    }

    const std::size_t best = champion(population);
    if (std::find(pool.begin(), pool.end(), best) == pool.end()) {
        pool.back() = best;
    }
    return pool;
}

void advance(PopulationState& state, const std::vector<std::size_t>& pool, const RunConfig& config)
{
    const auto params = config.variation.resolved(config.lines);
    const std::size_t next_generation = state.generation + 1;

    std::vector<Network> parents;
    parents.reserve(pool.size());
    for (auto idx : pool) {
        parents.push_back(state.population[idx].genome);
    }

    const std::size_t count = config.population_size - pool.size();
    std::vector<Network> genomes;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> lineage;
    genomes.reserve(count);
    lineage.reserve(count);
    for (std::size_t slot = 0; slot < count; ++slot) {
        Rng rng = substream(config.seed, next_generation, slot);
        auto child = make_offspring(parents, params, rng);
        lineage.emplace_back(state.population[pool[child.parent_a]].id, state.population[pool[child.parent_b]].id);
        genomes.push_back(std::move(child.genome));
    }
    auto evals = state.cache.evaluate_all(genomes, config.workers);

    std::vector<Individual> next;
    next.reserve(config.population_size);
    for (auto idx : pool) {
        next.push_back(state.population[idx]);
    }
    for (std::size_t slot = 0; slot < count; ++slot) {
        auto ind = make_individual(state.next_id++, std::move(genomes[slot]), std::move(evals[slot]), config);
        ind.parents = lineage[slot];
        next.push_back(std::move(ind));
    }
    state.population = std::move(next);
    state.generation = next_generation;
}

void step_generation(PopulationState& state, const RunConfig& config)
{
    const auto pool = select_parents(state.population, config);
    advance(state, pool, config);
}

GenerationRecord record_generation(const PopulationState& state, const std::vector<std::size_t>& pool,
                                   const RunConfig& config)
{
    GenerationRecord rec;
    rec.generation = state.generation;
    rec.best_fitness = single_fitness(state.population[champion(state.population)].eval);
    rec.min_mistakes = state.population.front().eval.mistakes;
    for (const auto& ind : state.population) {
        rec.min_mistakes = std::min(rec.min_mistakes, ind.eval.mistakes);
    }
    if (auto best = best_correct(state.population)) {
        rec.best_c_correct = best->min_comparators.eval.comparators;
        rec.best_l_correct = best->min_layers.eval.layers;
    }
    if (pool.size() >= 2) {
        double sum = 0;
        for (std::size_t a = 0; a < pool.size(); ++a) {
            const auto& ba = state.population[pool[a]].eval.behavior;
            const Eigen::Map<const Eigen::Matrix<std::uint64_t, Eigen::Dynamic, 1>> va(ba.data(), static_cast<Eigen::Index>(ba.size()));
            for (std::size_t b = a + 1; b < pool.size(); ++b) {
                const auto& bb = state.population[pool[b]].eval.behavior;
                const Eigen::Map<const Eigen::Matrix<std::uint64_t, Eigen::Dynamic, 1>> vb(bb.data(), static_cast<Eigen::Index>(bb.size()));
                sum += behavior_distance(va, vb, config.novelty.distance_metric);
            }
        }
        rec.elite_diversity = sum / (static_cast<double>(pool.size() * (pool.size() - 1)) / 2.0);
    }
    return rec;
}

RunResult run(const RunConfig& config)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    RunResult result;
    result.seed = config.seed;
    result.records.reserve(config.generations + 1);

    auto state = initialize(config);
    for (;;) {
        const auto pool = select_parents(state.population, config);
        result.records.push_back(record_generation(state, pool, config));

        if (auto found = best_correct(state.population)) {
            if (!result.first_correct_generation) {
                result.first_correct_generation = state.generation;
            }
            if (!result.best) {
                result.best = std::move(found);
            } else {
                auto& best = *result.best;
                const auto& c = found->min_comparators;
                const auto& l = found->min_layers;
                if (std::tie(c.eval.comparators, c.eval.layers, c.id) <
                    std::tie(best.min_comparators.eval.comparators, best.min_comparators.eval.layers, best.min_comparators.id)) {
                    best.min_comparators = c;
                }
                if (std::tie(l.eval.layers, l.eval.comparators, l.id) <
                    std::tie(best.min_layers.eval.layers, best.min_layers.eval.comparators, best.min_layers.id)) {
                    best.min_layers = l;
                }
            }
        }

        if (state.generation >= config.generations) {
            break;
        }
        advance(state, pool, config);
    }

    result.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

std::string format_number(double value)
{
    if (std::isfinite(value) && value == std::floor(value) && std::fabs(value) < 9.0e15) {
        return std::to_string(static_cast<long long>(value));
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_run_csv(std::ostream& os, const RunResult& result)
{
    os << "# schema=1\n";
    os << "generation,best_fitness,min_m,best_c_correct,best_l_correct,elite_diversity\n";
    for (const auto& r : result.records) {
        os << r.generation << ',' << format_number(r.best_fitness) << ',' << r.min_mistakes << ',';
        if (r.best_c_correct) {
            os << *r.best_c_correct;
        }
        os << ',';
        if (r.best_l_correct) {
            os << *r.best_l_correct;
        }
        os << ',' << format_number(r.elite_diversity) << '\n';
    }
}

std::string run_csv(const RunResult& result)
{
    std::ostringstream os;
    write_run_csv(os, result);
    return os.str();
}

} // namespace compnovel
