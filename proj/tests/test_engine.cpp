#include <doctest.h>

#include <algorithm>
#include <set>

#include "compnovel/engine.hpp"

using namespace compnovel;

namespace {

constexpr MethodKind kMethods[] = {MethodKind::SingleObjective, MethodKind::MultiObjective,
                                   MethodKind::CompositeMultiObjective, MethodKind::CompositeNovelty};

RunConfig small(MethodKind method, unsigned lines, std::size_t pop, std::size_t gens, std::uint64_t seed = 1)
{
    RunConfig cfg;
    cfg.method = method;
    cfg.lines = lines;
    cfg.population_size = pop;
    cfg.generations = gens;
    cfg.seed = seed;
    return cfg;
}

Individual correct_with(std::uint64_t id, std::uint32_t c, std::uint32_t l)
{
    Individual ind;
    ind.id = id;
    ind.eval.mistakes = 0;
    ind.eval.comparators = c;
    ind.eval.layers = l;
    return ind;
}

} // namespace

TEST_CASE("config validation names the offending key")
{
    auto cfg = small(MethodKind::CompositeNovelty, 6, 100, 10);
    CHECK_NOTHROW(cfg.validate());

    auto bad = cfg;
    bad.elite_fraction = 0;
    try {
        bad.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "selection.elite_fraction");
    }

    bad = cfg;
    bad.population_size = 9;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.novelty.selection_multiplier = 11;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    bad = cfg;
    bad.variation.crossover_prob = 1.5;
    try {
        bad.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "variation.crossover_prob");
    }

    CHECK(parse_method("cmo-novelty") == MethodKind::CompositeNovelty);
    CHECK(method_name(MethodKind::MultiObjective) == "mo");
    CHECK_THROWS(parse_method("nsga3"));
}

TEST_CASE("best_correct")
{
    Individual wrong;
    wrong.eval.mistakes = 3;
    CHECK_FALSE(best_correct({wrong}).has_value());

    const auto only = best_correct({wrong, correct_with(4, 10, 5)});
    REQUIRE(only);
    CHECK(only->min_comparators.id == 4);
    CHECK(only->min_layers.id == 4);

    const auto two = best_correct({correct_with(1, 19, 7), correct_with(2, 20, 6)});
    REQUIRE(two);
    CHECK(two->min_comparators.id == 1);
    CHECK(two->min_layers.id == 2);

    const auto tie = best_correct({correct_with(9, 19, 7), correct_with(3, 19, 7), correct_with(5, 19, 8)});
    CHECK(tie->min_comparators.id == 3);
}

TEST_CASE("two lines: every method finds the single comparator")
{
    for (auto method : kMethods) {
        const auto result = run(small(method, 2, 50, 20));
        REQUIRE(result.best);
        CHECK(result.best->min_comparators.eval.comparators == 1);
        CHECK(result.best->min_comparators.eval.layers == 1);
        CHECK(result.records.back().min_mistakes == 0);
        CHECK(result.records.size() == 21);
    }
}

TEST_CASE("identical population without variation is a fixed point")
{
    auto cfg = small(MethodKind::CompositeMultiObjective, 2, 20, 5);
    cfg.variation.init_min = cfg.variation.init_max = 1;
    cfg.variation.crossover_prob = 0;
    cfg.variation.mutation_prob = 0;
    auto state = initialize(cfg);
    const auto genome = state.population.front().genome;
    for (int g = 0; g < 5; ++g) {
        step_generation(state, cfg);
        REQUIRE(state.population.size() == 20);
        for (const auto& ind : state.population) {
            REQUIRE(ind.genome == genome);
        }
    }
}

TEST_CASE("generation invariants for every method")
{
    for (auto method : kMethods) {
        CAPTURE(method_name(method));
        auto cfg = small(method, 6, 60, 0, 11);
        auto state = initialize(cfg);
        double best = 1e18;
        for (int g = 0; g < 30; ++g) {
            double current = 1e18;
            for (const auto& ind : state.population) {
                current = std::min(current, single_fitness(ind.eval));
                REQUIRE(ind.objectives == objectives_for(method, ind.eval, cfg.weights));
            }
            REQUIRE(current <= best);
            best = current;

            const auto pool = select_parents(state.population, cfg);
            REQUIRE(pool.size() == cfg.elite_count());
            std::set<std::uint64_t> elite_ids;
            for (auto idx : pool) {
                elite_ids.insert(state.population[idx].id);
            }
            advance(state, pool, cfg);
            REQUIRE(state.population.size() == cfg.population_size);
            for (const auto& ind : state.population) {
                if (elite_ids.count(ind.id)) {
                    continue;
                }
                REQUIRE(ind.parents);
                REQUIRE(elite_ids.count(ind.parents->first));
                REQUIRE(elite_ids.count(ind.parents->second));
            }
        }
    }
}

TEST_CASE("runs are deterministic regardless of worker count")
{
    for (auto method : kMethods) {
        auto cfg = small(method, 6, 80, 25, 5);
        const auto a = run_csv(run(cfg));
        cfg.workers = 3;
        const auto b = run_csv(run(cfg));
        CHECK(a == b);
    }
}

TEST_CASE("novelty with multiplier one reproduces the composite method")
{
    auto cmo = small(MethodKind::CompositeMultiObjective, 6, 100, 40, 21);
    auto nov = cmo;
    nov.method = MethodKind::CompositeNovelty;
    nov.novelty.selection_multiplier = 1;
    CHECK(run_csv(run(cmo)) == run_csv(run(nov)));
}

TEST_CASE("evaluation cache returns the same evaluations")
{
    EvaluationCache cache(8);
    std::vector<Network> nets;
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        nets.push_back(random_network(5, VariationParams{}, rng));
    }
    nets.push_back(nets[0]);
    nets.push_back(nets[3]);
    const auto first = cache.evaluate_all(nets, 2);
    const auto second = cache.evaluate_all(nets, 1);
    for (std::size_t i = 0; i < nets.size(); ++i) {
        CHECK(first[i] == evaluate(nets[i]));
        CHECK(second[i] == first[i]);
    }
    CHECK(cache.size() <= 21);
}

TEST_CASE("run csv format")
{
    RunResult r;
    GenerationRecord a;
    a.generation = 0;
    a.best_fitness = 510304;
    a.min_mistakes = 51;
    a.elite_diversity = 12.5;
    GenerationRecord b = a;
    b.generation = 1;
    b.best_fitness = 305;
    b.min_mistakes = 0;
    b.best_c_correct = 5;
    b.best_l_correct = 3;
    b.elite_diversity = 0;
    r.records = {a, b};
    CHECK(run_csv(r) == "# schema=1\n"
                        "generation,best_fitness,min_m,best_c_correct,best_l_correct,elite_diversity\n"
                        "0,510304,51,,,12.5\n"
                        "1,305,0,5,3,0\n");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2) == "2");
}
