#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "compnovel/genetics.hpp"
#include "compnovel/network.hpp"
#include "oracles.hpp"

using namespace compnovel;

namespace {

Network figure_one()
{
    return Network(4, {{0, 1}, {2, 3}, {0, 2}, {1, 3}, {1, 2}});
}

Network random_net(unsigned n, std::size_t len, Rng& rng)
{
    std::uniform_int_distribution<std::size_t> pick(0, pair_count(n) - 1);
    std::vector<Comparator> seq;
    for (std::size_t i = 0; i < len; ++i) {
        seq.push_back(pair_at(n, pick(rng)));
    }
    return Network(n, std::move(seq));
}

} // namespace

TEST_CASE("canonicalize orders legs and rejects bad comparators")
{
    CHECK(canonicalize(3, 1, 4) == Comparator{1, 3});
    CHECK(canonicalize(0, 1, 4) == Comparator{0, 1});
    CHECK_THROWS_AS(canonicalize(2, 2, 4), InvalidComparator);
    CHECK_THROWS_AS(canonicalize(0, 4, 4), InvalidComparator);
}

TEST_CASE("pair_at enumerates every canonical pair once")
{
    for (unsigned n : {2U, 3U, 6U, 16U}) {
        std::vector<Comparator> seen;
        for (std::size_t i = 0; i < pair_count(n); ++i) {
            const auto c = pair_at(n, i);
            CHECK(c.first < c.second);
            CHECK(c.second < n);
            seen.push_back(c);
        }
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
    }
}

TEST_CASE("network invariants are enforced")
{
    CHECK_THROWS(Network(1));
    CHECK_THROWS(Network(33));
    CHECK_THROWS(Network(4, {{2, 1}}));
    CHECK_THROWS(Network(4, {{0, 4}}));
    CHECK_THROWS(Network(4, std::vector<Comparator>(101, Comparator{0, 1})));
    CHECK_NOTHROW(Network(4, std::vector<Comparator>(100, Comparator{0, 1})));
}

TEST_CASE("compute_layers groups greedily")
{
    const auto layers = compute_layers(figure_one());
    REQUIRE(layers.count == 3);
    CHECK(layers.groups[0] == std::vector<Comparator>{{0, 1}, {2, 3}});
    CHECK(layers.groups[1] == std::vector<Comparator>{{0, 2}, {1, 3}});
    CHECK(layers.groups[2] == std::vector<Comparator>{{1, 2}});

    CHECK(compute_layers(Network(4)).count == 0);
    CHECK(compute_layers(Network(3, {{0, 1}, {0, 2}})).count == 2);
}

TEST_CASE("count_mistakes on small networks")
{
    CHECK(count_mistakes(Network(2)) == 1);
    CHECK(count_mistakes(Network(2, {{0, 1}})) == 0);
    CHECK(count_mistakes(Network(3)) == 4);
}

TEST_CASE("behavior_vector counts swaps on both lines")
{
    CHECK(behavior_vector(Network(2, {{0, 1}})) == std::vector<std::uint64_t>{1, 1});
    CHECK(behavior_vector(Network(5)) == std::vector<std::uint64_t>(5, 0));
    CHECK(behavior_vector(Network(3, {{0, 1}})) == std::vector<std::uint64_t>{2, 2, 0});
}

TEST_CASE("evaluate fuses mistakes, layers, comparators and behavior")
{
    const auto fig = evaluate(figure_one());
    CHECK(fig.mistakes == 0);
    CHECK(fig.layers == 3);
    CHECK(fig.comparators == 5);

    const auto two = evaluate(Network(2, {{0, 1}}));
    CHECK(two.mistakes == 0);
    CHECK(two.layers == 1);
    CHECK(two.comparators == 1);
    CHECK(two.behavior == std::vector<std::uint64_t>{1, 1});

    const auto empty5 = evaluate(Network(5));
    CHECK(empty5.mistakes == 26);
    CHECK(empty5.layers == 0);
    CHECK(empty5.comparators == 0);

    // n + 1 sorted zero-one patterns exist for any n
    for (unsigned n : {2U, 7U, 12U}) {
        CHECK(evaluate(Network(n)).mistakes == (std::uint64_t{1} << n) - (n + 1));
    }
}

TEST_CASE("bit-parallel evaluation matches the per-input oracle")
{
    Rng rng(20240601);
    for (int trial = 0; trial < 400; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(trial % 9); // 2..10, crosses the 64-input word boundary
        const auto net = random_net(n, static_cast<std::size_t>(rng() % 40), rng);
        const auto fast = evaluate(net);
        const auto slow = oracle::naive_evaluate(net);
        REQUIRE(fast.mistakes == slow.mistakes);
        REQUIRE(fast.behavior == slow.behavior);
    }
}

TEST_CASE("evaluation properties on random networks")
{
    Rng rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const unsigned n = 2 + static_cast<unsigned>(rng() % 11);
        const auto net = random_net(n, static_cast<std::size_t>(rng() % 101), rng);
        const auto ev = evaluate(net);
        CHECK(ev.comparators == net.size());
        CHECK(ev.layers == compute_layers(net).count);
        CHECK(ev.layers <= ev.comparators);
        CHECK((ev.layers == 0) == (ev.comparators == 0));
        CHECK(ev.mistakes <= (std::uint64_t{1} << n));
        CHECK(std::accumulate(ev.behavior.begin(), ev.behavior.end(), std::uint64_t{0}) % 2 == 0);

        std::vector<Comparator> flat;
        for (const auto& g : compute_layers(net).groups) {
            flat.insert(flat.end(), g.begin(), g.end());
        }
        CHECK(flat == net.comparators());
    }
}

TEST_CASE("correct networks sort random permutations")
{
    // Odd-even transposition networks are correct for every n.
    for (unsigned n = 2; n <= 12; ++n) {
        std::vector<Comparator> seq;
        for (unsigned round = 0; round < n; ++round) {
            for (unsigned i = round % 2; i + 1 < n; i += 2) {
                seq.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(i + 1)});
            }
        }
        if (seq.size() > kMaxComparators) {
            continue;
        }
        const Network net(n, seq);
        REQUIRE(evaluate(net).mistakes == 0);
        Rng rng(n);
        std::vector<int> values(n);
        for (int k = 0; k < 1000; ++k) {
            std::iota(values.begin(), values.end(), 0);
            std::shuffle(values.begin(), values.end(), rng);
            apply(net, values);
            CHECK(std::is_sorted(values.begin(), values.end(), std::greater<>()));
        }
    }
}

TEST_CASE("text format")
{
    const auto net = figure_one();
    CHECK(serialize(net) == "lines 4\n0 1\n2 3\n0 2\n1 3\n1 2\n");
    CHECK(parse_network(serialize(net)) == net);

    const auto parsed = parse_network("# header comment\n\nlines 3\n2 0   # reversed legs\n\n1 2\n");
    CHECK(parsed == Network(3, {{0, 2}, {1, 2}}));

    SUBCASE("errors name the line")
    {
        try {
            parse_network("lines 5\n0 1\n4 4\n");
            FAIL("expected parse error");
        } catch (const NetworkParseError& e) {
            CHECK(e.line() == 3);
        }
        CHECK_THROWS_AS(parse_network("0 1\n"), NetworkParseError);
        CHECK_THROWS_AS(parse_network("lines 4\n0 9\n"), NetworkParseError);
        CHECK_THROWS_AS(parse_network("lines 4\n0 x\n"), NetworkParseError);
        CHECK_THROWS_AS(parse_network(""), NetworkParseError);
    }

    SUBCASE("round trip on random networks")
    {
        Rng rng(99);
        for (int trial = 0; trial < 200; ++trial) {
            const unsigned n = 2 + static_cast<unsigned>(rng() % 31);
            const auto r = random_net(n, static_cast<std::size_t>(rng() % 101), rng);
            REQUIRE(parse_network(serialize(r)) == r);
        }
    }
}
