#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace compnovel {

using Fronts = std::vector<std::vector<std::size_t>>;

/// Minimization dominance: a <= b everywhere and a < b somewhere.
template <typename DerivedA, typename DerivedB>
bool dominates(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("dominates: objective vectors differ in length");
    }
    bool strictly = false;
    for (Eigen::Index k = 0; k < a.size(); ++k) {
        if (a(k) > b(k)) {
            return false;
        }
        strictly = strictly || a(k) < b(k);
    }
    return strictly;
}

/// Deb's fast non-dominated sort over the rows of `points`. Front members
/// are listed in ascending row order.
template <typename Derived>
Fronts fast_nondominated_sort(const Eigen::DenseBase<Derived>& points)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (n == 0) {
        throw std::invalid_argument("fast_nondominated_sort: empty population");
    }
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    Fronts fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        const auto row_p = points.row(static_cast<Eigen::Index>(p));
        for (std::size_t q = p + 1; q < n; ++q) {
            const auto row_q = points.row(static_cast<Eigen::Index>(q));
            if (dominates(row_p, row_q)) {
                dominated_by_me[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(row_q, row_p)) {
                dominated_by_me[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p) {
        if (domination_count[p] == 0) {
            fronts[0].push_back(p);
        }
    }
    for (std::size_t f = 0; !fronts[f].empty(); ++f) {
        std::vector<std::size_t> next;
        for (auto p : fronts[f]) {
            for (auto q : dominated_by_me[p]) {
                if (--domination_count[q] == 0) {
                    next.push_back(q);
                }
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

/// NSGA-II crowding distance for the rows listed in `front`, returned in the
/// same order. Boundary points of each non-constant objective get +infinity;
/// constant objectives contribute nothing. Ties within an objective are broken
/// lexicographically over the full vector, then by `ids` (row index if empty),
/// so the result does not depend on the order of `front`.
template <typename Derived>
std::vector<double> crowding_distance(const Eigen::DenseBase<Derived>& points, std::span<const std::size_t> front,
                                      std::span<const std::uint64_t> ids = {})
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const std::size_t size = front.size();
    if (size == 0) {
        throw std::invalid_argument("crowding_distance: empty front");
    }
    std::vector<double> distance(size, 0.0);
    if (size == 1) {
        distance[0] = inf;
        return distance;
    }
    auto id_of = [&](std::size_t local) -> std::uint64_t { return ids.empty() ? front[local] : ids[front[local]]; };
    auto value = [&](std::size_t local, Eigen::Index k) {
        return static_cast<double>(points(static_cast<Eigen::Index>(front[local]), k));
    };

    std::vector<std::size_t> order(size);
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (value(x, k) != value(y, k)) {
                return value(x, k) < value(y, k);
            }
            for (Eigen::Index j = 0; j < points.cols(); ++j) {
                if (value(x, j) != value(y, j)) {
                    return value(x, j) < value(y, j);
                }
            }
            return id_of(x) < id_of(y);
        });
        const double lo = value(order.front(), k);
        const double hi = value(order.back(), k);
        if (hi == lo) {
            continue;
        }
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        for (std::size_t r = 1; r + 1 < size; ++r) {
            distance[order[r]] += (value(order[r + 1], k) - value(order[r - 1], k)) / (hi - lo);
        }
    }
    return distance;
}

/// Crowding distance of a stand-alone front given one vector per row.
template <typename Derived>
std::vector<double> crowding_distance(const Eigen::DenseBase<Derived>& front_points)
{
    std::vector<std::size_t> all(static_cast<std::size_t>(front_points.rows()));
    std::iota(all.begin(), all.end(), std::size_t{0});
    return crowding_distance(front_points, std::span<const std::size_t>(all));
}

struct RankedIndividual {
    std::size_t index = 0; ///< row in the objective matrix
    std::uint64_t id = 0;
    std::size_t rank = 0;
    double crowding = 0.0;
};

/// Truncation order: front rank ascending, crowding descending, id ascending.
inline bool selection_precedes(const RankedIndividual& a, const RankedIndividual& b)
{
    if (a.rank != b.rank) {
        return a.rank < b.rank;
    }
    if (a.crowding != b.crowding) {
        return a.crowding > b.crowding;
    }
    return a.id < b.id;
}

/// Assigns rank and crowding to every row. A single objective column is
/// ranked by distinct value directly (equivalent to the general sort).
template <typename Derived>
std::vector<RankedIndividual> rank_population(const Eigen::DenseBase<Derived>& points, std::span<const std::uint64_t> ids)
{
    const auto n = static_cast<std::size_t>(points.rows());
    if (ids.size() != n) {
        throw std::invalid_argument("rank_population: one id per row required");
    }
    std::vector<RankedIndividual> ranked(n);
    for (std::size_t i = 0; i < n; ++i) {
        ranked[i].index = i;
        ranked[i].id = ids[i];
    }
    if (n == 0) {
        return ranked;
    }

    Fronts fronts;
    if (points.cols() == 1) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return points(static_cast<Eigen::Index>(x), 0) < points(static_cast<Eigen::Index>(y), 0);
        });
        for (std::size_t r = 0; r < n; ++r) {
            if (r == 0 || points(static_cast<Eigen::Index>(order[r]), 0) != points(static_cast<Eigen::Index>(order[r - 1]), 0)) {
                fronts.emplace_back();
            }
            fronts.back().push_back(order[r]);
        }
    } else {
        fronts = fast_nondominated_sort(points);
    }

    for (std::size_t f = 0; f < fronts.size(); ++f) {
        const auto dist = crowding_distance(points, std::span<const std::size_t>(fronts[f]), ids);
        for (std::size_t j = 0; j < fronts[f].size(); ++j) {
            ranked[fronts[f][j]].rank = f;
            ranked[fronts[f][j]].crowding = dist[j];
        }
    }
    return ranked;
}

/// Whole population in truncation order.
inline std::vector<RankedIndividual> selection_order(std::vector<RankedIndividual> ranked)
{
    std::sort(ranked.begin(), ranked.end(), selection_precedes);
    return ranked;
}

/// Elitist truncation: the first k individuals in selection order.
inline std::vector<RankedIndividual> truncation_select(std::vector<RankedIndividual> ranked, std::size_t k)
{
    if (k > ranked.size()) {
        throw std::invalid_argument("truncation_select: k exceeds population size");
    }
    ranked = selection_order(std::move(ranked));
    ranked.resize(k);
    return ranked;
}

} // namespace compnovel
