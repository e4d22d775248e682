#include "compnovel/objectives.hpp"

namespace compnovel {

ObjectiveVector objectives_for(MethodKind method, const Evaluation& ev, const CompositeWeights& w)
{
    const auto m = static_cast<Scalar>(ev.mistakes);
    const auto l = static_cast<Scalar>(ev.layers);
    const auto c = static_cast<Scalar>(ev.comparators);
    switch (method) {
    case MethodKind::SingleObjective: {
        ObjectiveVector v(1);
        v(0) = single_fitness(m, l, c);
        return v;
    }
    case MethodKind::MultiObjective:
        return raw_objectives(m, l, c);
    case MethodKind::CompositeMultiObjective:
    case MethodKind::CompositeNovelty:
        return composite_objectives(m, l, c, w);
    }
    throw std::logic_error("unknown method");
}

} // namespace compnovel
