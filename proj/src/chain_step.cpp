#include "wiretap/chain_step.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace wiretap {

std::string_view to_string(Relation r) {
    switch (r) {
        case Relation::Equal: return "=";
        case Relation::LessEq: return "<=";
        case Relation::GreaterEq: return ">=";
        case Relation::Near: return "~";
    }
    return "?";
}

ChainStep make_step(std::string label, std::string anchor, double lhs, Relation relation, double rhs,
                    double tolerance) {
    ChainStep s;
    s.label = std::move(label);
    s.anchor = std::move(anchor);
    s.lhs = lhs;
    s.rhs = rhs;
    s.relation = relation;
    s.tolerance = tolerance;
    switch (relation) {
        case Relation::LessEq: s.slack = rhs - lhs; break;
        case Relation::GreaterEq: s.slack = lhs - rhs; break;
        default: s.slack = -std::abs(lhs - rhs); break;
    }
    s.ok = std::isfinite(lhs) && std::isfinite(rhs) ? s.slack >= -tolerance : (relation == Relation::LessEq && rhs == std::numeric_limits<double>::infinity());
    return s;
}

}  // namespace wiretap
