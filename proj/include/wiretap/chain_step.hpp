#pragma once

#include <string>
#include <string_view>

namespace wiretap {

enum class Relation { Equal, LessEq, GreaterEq, Near };
std::string_view to_string(Relation r);

struct ChainStep {
    std::string label;
    std::string anchor;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::Equal;
    double tolerance = 1e-9;  // equality tolerance, or the statistical band for Near
    double slack = 0.0;       // rhs - lhs for <=, lhs - rhs for >=, -|lhs - rhs| otherwise
    bool ok = false;
};

ChainStep make_step(std::string label, std::string anchor, double lhs, Relation relation,
                    double rhs, double tolerance = 1e-9);

}  // namespace wiretap
