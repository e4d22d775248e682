#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "compnovel/moea.hpp"
#include "compnovel/objectives.hpp"
#include "oracles.hpp"

using namespace compnovel;

namespace {

ObjectiveMatrix random_points(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols, int range)
{
    std::uniform_int_distribution<int> v(0, range);
    ObjectiveMatrix p(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index k = 0; k < cols; ++k) {
            p(i, k) = v(rng);
        }
    }
    return p;
}

std::vector<std::uint64_t> iota_ids(std::size_t n)
{
    std::vector<std::uint64_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

} // namespace

TEST_CASE("dominance")
{
    CHECK(dominates(Eigen::Vector3d(0, 3, 5), Eigen::Vector3d(0, 3, 6)));
    CHECK_FALSE(dominates(Eigen::Vector3d(0, 3, 5), Eigen::Vector3d(1, 2, 4)));
    CHECK_FALSE(dominates(Eigen::Vector3d(1, 2, 4), Eigen::Vector3d(0, 3, 5)));
    CHECK_FALSE(dominates(Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, 1, 1)));
    CHECK_THROWS_AS(dominates(Eigen::Vector3d(1, 1, 1), Eigen::Vector2d(1, 1)), std::invalid_argument);
}

TEST_CASE("fast non-dominated sort on small cases")
{
    ObjectiveMatrix p(3, 2);
    p << 0, 1, 1, 0, 1, 1;
    const auto fronts = fast_nondominated_sort(p);
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t>{0, 1});
    CHECK(fronts[1] == std::vector<std::size_t>{2});

    ObjectiveMatrix same = ObjectiveMatrix::Constant(6, 3, 4.0);
    CHECK(fast_nondominated_sort(same).size() == 1);
    CHECK(fast_nondominated_sort(same)[0].size() == 6);

    CHECK_THROWS(fast_nondominated_sort(ObjectiveMatrix(0, 3)));
}

TEST_CASE("fast non-dominated sort matches brute force on 200 random populations")
{
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = static_cast<Eigen::Index>(10 + rng() % 191);
        const auto pts = random_points(rng, rows, 3, trial % 2 ? 6 : 1000);
        const auto fronts = fast_nondominated_sort(pts);
        const auto expected = oracle::brute_force_ranks(pts);
        std::size_t total = 0;
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            total += fronts[f].size();
            for (auto i : fronts[f]) {
                REQUIRE(expected[i] == f);
            }
        }
        REQUIRE(total == static_cast<std::size_t>(rows));
    }
}

TEST_CASE("crowding distance")
{
    const double inf = std::numeric_limits<double>::infinity();
    ObjectiveMatrix single(1, 3);
    single << 1, 2, 3;
    CHECK(crowding_distance(single) == std::vector<double>{inf});

    ObjectiveMatrix line(3, 1);
    line << 1, 2, 4;
    CHECK(crowding_distance(line) == std::vector<double>{inf, 1.0, inf});

    // second objective constant: contributes nothing
    ObjectiveMatrix flat(4, 2);
    flat << 1, 7, 2, 7, 3, 7, 5, 7;
    const auto d = crowding_distance(flat);
    CHECK(d[0] == inf);
    CHECK(d[3] == inf);
    CHECK(d[1] == doctest::Approx((3.0 - 1.0) / 4.0));
    CHECK(d[2] == doctest::Approx((5.0 - 2.0) / 4.0));

    CHECK(crowding_distance(ObjectiveMatrix::Constant(5, 3, 2.0)) == std::vector<double>(5, 0.0));
}

TEST_CASE("crowding distance is permutation invariant")
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_points(rng, 30, 3, 5);
        const auto ids = iota_ids(30);
        std::vector<std::size_t> front(30);
        std::iota(front.begin(), front.end(), 0);
        const auto base = crowding_distance(pts, std::span<const std::size_t>(front), ids);
        std::shuffle(front.begin(), front.end(), rng);
        const auto shuffled = crowding_distance(pts, std::span<const std::size_t>(front), ids);
        for (std::size_t j = 0; j < front.size(); ++j) {
            REQUIRE(shuffled[j] == base[front[j]]);
        }
    }
}

TEST_CASE("truncation selection")
{
    std::mt19937_64 rng(12);
    const auto pts = random_points(rng, 10, 3, 9);
    const auto ids = iota_ids(10);
    const auto all = truncation_select(rank_population(pts, ids), 10);
    CHECK(all.size() == 10);
    CHECK_THROWS_AS(truncation_select(rank_population(pts, ids), 11), std::invalid_argument);

    SUBCASE("two fronts of five")
    {
        ObjectiveMatrix p(10, 2);
        for (int i = 0; i < 5; ++i) {
            p.row(i) << i, 4 - i;
            p.row(i + 5) << i + 1, 5 - i;
        }
        const auto chosen = truncation_select(rank_population(p, iota_ids(10)), 5);
        for (const auto& r : chosen) {
            CHECK(r.rank == 0);
            CHECK(r.index < 5);
        }
        // boundaries first
        CHECK(std::isinf(chosen[0].crowding));
        CHECK(std::isinf(chosen[1].crowding));
        CHECK_FALSE(std::isinf(chosen[2].crowding));
    }

    SUBCASE("scalar objective sorts ascending with id ties")
    {
        ObjectiveMatrix s(5, 1);
        s << 30, 10, 20, 10, 5;
        const auto order = selection_order(rank_population(s, std::vector<std::uint64_t>{4, 3, 2, 1, 0}));
        std::vector<std::size_t> idx;
        for (const auto& r : order) {
            idx.push_back(r.index);
        }
        CHECK(idx == std::vector<std::size_t>{4, 3, 1, 2, 0});
    }
}

TEST_CASE("truncation never skips a better front and is deterministic")
{
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const auto rows = static_cast<Eigen::Index>(10 + rng() % 100);
        const auto pts = random_points(rng, rows, 3, 8);
        const auto ids = iota_ids(static_cast<std::size_t>(rows));
        const std::size_t k = static_cast<std::size_t>(rows) / 10 + 1;
        const auto ranked = rank_population(pts, ids);
        const auto chosen = truncation_select(ranked, k);
        std::size_t worst = 0;
        for (const auto& r : chosen) {
            worst = std::max(worst, r.rank);
        }
        std::size_t in_better_fronts = 0;
        for (const auto& r : ranked) {
            in_better_fronts += r.rank < worst ? 1 : 0;
        }
        std::size_t chosen_better = 0;
        for (const auto& r : chosen) {
            chosen_better += r.rank < worst ? 1 : 0;
        }
        REQUIRE(in_better_fronts == chosen_better);

        const auto again = truncation_select(rank_population(pts, ids), k);
        for (std::size_t i = 0; i < k; ++i) {
            REQUIRE(again[i].index == chosen[i].index);
        }
    }
}

TEST_CASE("lexicographic minimum is a crowding boundary")
{
    // the best single-fitness point must survive truncation of its front
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_points(rng, 60, 3, 4);
        const auto ids = iota_ids(60);
        const auto ranked = rank_population(pts, ids);
        std::size_t lexmin = 0;
        for (std::size_t i = 1; i < 60; ++i) {
            const auto a = pts.row(static_cast<Eigen::Index>(i));
            const auto b = pts.row(static_cast<Eigen::Index>(lexmin));
            if (std::make_tuple(a(0), a(1), a(2)) < std::make_tuple(b(0), b(1), b(2))) {
                lexmin = i;
            }
        }
        CHECK(ranked[lexmin].rank == 0);
        bool spread = false;
        std::size_t front_size = 0;
        for (std::size_t i = 0; i < 60; ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            front_size += ranked[i].rank == 0 ? 1 : 0;
            spread |= ranked[i].rank == 0 && pts.row(row) != pts.row(static_cast<Eigen::Index>(lexmin));
        }
        // a front of several identical points has no boundary at all
        if (spread || front_size == 1) {
            CHECK(std::isinf(ranked[lexmin].crowding));
        } else {
            CHECK(ranked[lexmin].crowding == 0.0);
        }
    }
}
