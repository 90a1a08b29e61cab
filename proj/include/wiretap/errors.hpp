#pragma once

#include <stdexcept>
#include <string>

namespace wiretap {

// Parameters violate a type invariant or an operation precondition.
class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A capacity/bound expression would be +inf (zero noise variance). Distinct from a
// numeric result on purpose: callers have to decide what an infinite link means.
class InfiniteCapacity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The requested combination has no result (e.g. message-aware Tx help).
class Unsupported : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Discretization failed its own refinement check.
class GridTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A desk-scale guard (codebook size, tensor size) was exceeded.
class ResourceCap : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace wiretap
