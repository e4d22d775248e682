#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace compnovel {

/// One behavior vector per row.
using BehaviorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class DistanceMetric { L1, L2 };

DistanceMetric parse_metric(std::string_view name);
std::string_view metric_name(DistanceMetric metric);

struct NoveltyConfig {
    double selection_multiplier = 2.0;
    DistanceMetric distance_metric = DistanceMetric::L1;

    /// Requires 1 <= multiplier <= 1 / elite_fraction.
    void validate(double elite_fraction) const;
};

template <typename DerivedA, typename DerivedB>
double behavior_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                         DistanceMetric metric = DistanceMetric::L1)
{
    if (a.size() != b.size()) {
        throw std::invalid_argument("behavior_distance: vectors differ in length");
    }
    const auto diff = (a.template cast<double>() - b.template cast<double>()).eval();
    return metric == DistanceMetric::L1 ? diff.template lpNorm<1>() : diff.norm();
}

/// Symmetric matrix of distances between every pair of rows.
Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric);

/// Sum of distances from row i to every other row of the pool.
double novelty_score(std::size_t i, const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric = DistanceMetric::L1);
/// Distance from row i to its nearest other row.
double minimum_novelty(std::size_t i, const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric = DistanceMetric::L1);

/// Size of the broadened pool, round-half-up of elite_count * multiplier.
std::size_t broadened_size(std::size_t elite_count, double multiplier);

/// Two-stage novelty selection. `behaviors` rows and `ids` are the candidates
/// already in the base method's selection order. Stage 1 ranks the top B by
/// novelty within that pool and keeps E; stage 2 feeds the remaining B - E in
/// descending novelty, each time dropping the member with the lowest minimum
/// novelty (ties: lower stage-1 score, then higher id). Returns candidate
/// positions in ascending (method-rank) order.
std::vector<std::size_t> novelty_select(const Eigen::Ref<const BehaviorMatrix>& behaviors,
                                        std::span<const std::uint64_t> ids, std::size_t elite_count,
                                        const NoveltyConfig& config);

} // namespace compnovel
