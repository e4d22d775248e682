#pragma once

#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

#include "compnovel/network.hpp"

namespace compnovel {

using Scalar = double;
/// Point minimized by a selection method; length 1 (single objective) or 3.
template <typename S = Scalar>
using ObjectiveVectorT = Eigen::Matrix<S, Eigen::Dynamic, 1>;
using ObjectiveVector = ObjectiveVectorT<>;
/// One objective vector per row.
template <typename S = Scalar>
using ObjectiveMatrixT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ObjectiveMatrix = ObjectiveMatrixT<>;

enum class MethodKind { SingleObjective, MultiObjective, CompositeMultiObjective, CompositeNovelty };

/// Linear composite weights. The general composite form allows an exponent
/// per term; only unit exponents are supported.
template <typename S = Scalar>
struct CompositeWeightsT {
    S alpha1 = 1;
    S alpha2 = 10;
    S alpha3 = 1;
    S alpha4 = 10;

    void validate() const
    {
        if (!(alpha1 >= 0 && alpha2 >= 0 && alpha3 >= 0 && alpha4 >= 0)) {
            throw std::invalid_argument("composite weights alpha1..alpha4 must be non-negative");
        }
    }
};
using CompositeWeights = CompositeWeightsT<>;

/// 10000 m + 100 l + c. Strictly hierarchical while l, c < 100.
template <typename S = Scalar>
constexpr S single_fitness(S m, S l, S c) noexcept
{
    return S(10000) * m + S(100) * l + c;
}

template <typename S = Scalar>
Eigen::Matrix<S, 3, 1> raw_objectives(S m, S l, S c)
{
    return {m, l, c};
}

template <typename S = Scalar>
Eigen::Matrix<S, 3, 1> composite_objectives(S m, S l, S c, const CompositeWeightsT<S>& w = {})
{
    return {single_fitness(m, l, c), w.alpha1 * m + w.alpha2 * l, w.alpha3 * m + w.alpha4 * c};
}

constexpr Scalar single_fitness(const Evaluation& ev) noexcept
{
    return single_fitness<Scalar>(static_cast<Scalar>(ev.mistakes), ev.layers, ev.comparators);
}

constexpr Eigen::Index objective_count(MethodKind method) noexcept
{
    return method == MethodKind::SingleObjective ? 1 : 3;
}

/// Method-to-objective mapping: SO -> scalar fitness, MO -> (m, l, c),
/// CMO and CMO-Novelty -> composite triple.
ObjectiveVector objectives_for(MethodKind method, const Evaluation& ev, const CompositeWeights& w = {});

} // namespace compnovel
