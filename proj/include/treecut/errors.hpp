#pragma once

#include <stdexcept>
#include <string>

namespace treecut {

/// Simplex could not make progress within numeric tolerances, or a
/// post-solve consistency check failed.
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Wall-clock deadline passed inside a long-running solve.
struct TimeLimitExceeded : std::runtime_error {
    explicit TimeLimitExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A brute-force routine was asked to enumerate beyond its hard cap.
struct SizeGuard : std::invalid_argument {
    explicit SizeGuard(const std::string& what) : std::invalid_argument(what) {}
};

struct MalformedTree : std::invalid_argument {
    explicit MalformedTree(const std::string& what) : std::invalid_argument(what) {}
};

/// Requested a leaf subsystem for a leaf that is excluded from the
/// disjunction (its relaxation was infeasible).
struct ExcludedLeaf : std::invalid_argument {
    explicit ExcludedLeaf(const std::string& what) : std::invalid_argument(what) {}
};

/// Every leaf of the disjunction is excluded; there is nothing to build.
struct EmptyDisjunction : std::invalid_argument {
    explicit EmptyDisjunction(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace treecut
