#include "compnovel/novelty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace compnovel {

DistanceMetric parse_metric(std::string_view name)
{
    if (name == "l1" || name == "L1") {
        return DistanceMetric::L1;
    }
    if (name == "l2" || name == "L2") {
        return DistanceMetric::L2;
    }
    throw std::invalid_argument("unknown distance_metric '" + std::string(name) + "' (expected l1 or l2)");
}

std::string_view metric_name(DistanceMetric metric) { return metric == DistanceMetric::L1 ? "l1" : "l2"; }

void NoveltyConfig::validate(double elite_fraction) const
{
    // small slack so 1/0.1 is accepted despite rounding
    if (!(selection_multiplier >= 1.0) || selection_multiplier * elite_fraction > 1.0 + 1e-9) {
        throw std::invalid_argument("selection_multiplier must lie in [1, 1/elite_fraction]");
    }
}

Eigen::MatrixXd pairwise_distances(const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric)
{
    const Eigen::Index n = pool.rows();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d = behavior_distance(pool.row(i), pool.row(j), metric);
            dist(i, j) = d;
            dist(j, i) = d;
        }
    }
    return dist;
}

namespace {

void require_pool(std::size_t i, Eigen::Index rows)
{
    if (rows < 2) {
        throw std::invalid_argument("novelty needs a pool of at least two behaviors");
    }
    if (i >= static_cast<std::size_t>(rows)) {
        throw std::out_of_range("novelty: index outside pool");
    }
}

} // namespace

double novelty_score(std::size_t i, const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric)
{
    require_pool(i, pool.rows());
    double sum = 0.0;
    for (Eigen::Index j = 0; j < pool.rows(); ++j) {
        if (j != static_cast<Eigen::Index>(i)) {
            sum += behavior_distance(pool.row(static_cast<Eigen::Index>(i)), pool.row(j), metric);
        }
    }
    return sum;
}

double minimum_novelty(std::size_t i, const Eigen::Ref<const BehaviorMatrix>& pool, DistanceMetric metric)
{
    require_pool(i, pool.rows());
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < pool.rows(); ++j) {
        if (j != static_cast<Eigen::Index>(i)) {
            best = std::min(best, behavior_distance(pool.row(static_cast<Eigen::Index>(i)), pool.row(j), metric));
        }
    }
    return best;
}

std::size_t broadened_size(std::size_t elite_count, double multiplier)
{
    return static_cast<std::size_t>(std::floor(static_cast<double>(elite_count) * multiplier + 0.5));
}

std::vector<std::size_t> novelty_select(const Eigen::Ref<const BehaviorMatrix>& behaviors,
                                        std::span<const std::uint64_t> ids, std::size_t elite_count,
                                        const NoveltyConfig& config)
{
    const auto candidates = static_cast<std::size_t>(behaviors.rows());
    if (ids.size() != candidates) {
        throw std::invalid_argument("novelty_select: one id per candidate required");
    }
    if (elite_count == 0) {
        throw std::invalid_argument("novelty_select: elite count must be positive");
    }
    if (config.selection_multiplier < 1.0) {
        throw std::invalid_argument("novelty_select: selection_multiplier below 1");
    }
    const std::size_t broad = broadened_size(elite_count, config.selection_multiplier);
    if (broad > candidates) {
        throw std::invalid_argument("novelty_select: " + std::to_string(candidates) +
                                    " candidates cannot fill a broadened pool of " + std::to_string(broad));
    }

    std::vector<std::size_t> pool(elite_count);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    if (broad == elite_count) {
        return pool;
    }

    const Eigen::MatrixXd dist = pairwise_distances(behaviors.topRows(static_cast<Eigen::Index>(broad)), config.distance_metric);
    const Eigen::VectorXd score = dist.rowwise().sum();

    std::vector<std::size_t> by_novelty(broad);
    std::iota(by_novelty.begin(), by_novelty.end(), std::size_t{0});
    std::stable_sort(by_novelty.begin(), by_novelty.end(), [&](std::size_t a, std::size_t b) {
        return score(static_cast<Eigen::Index>(a)) > score(static_cast<Eigen::Index>(b));
    });

    pool.assign(by_novelty.begin(), by_novelty.begin() + static_cast<std::ptrdiff_t>(elite_count));
    for (std::size_t r = elite_count; r < broad; ++r) {
        pool.push_back(by_novelty[r]);
        std::size_t victim = 0;
        double victim_min = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < pool.size(); ++p) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < pool.size(); ++q) {
                if (q != p) {
                    nearest = std::min(nearest, dist(static_cast<Eigen::Index>(pool[p]), static_cast<Eigen::Index>(pool[q])));
                }
            }
            bool replace = p == 0 || nearest < victim_min;
            if (!replace && nearest == victim_min) {
                const double s_p = score(static_cast<Eigen::Index>(pool[p]));
                const double s_v = score(static_cast<Eigen::Index>(pool[victim]));
                replace = s_p < s_v || (s_p == s_v && ids[pool[p]] > ids[pool[victim]]);
            }
            if (replace) {
                victim = p;
                victim_min = nearest;
            }
        }
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace compnovel
