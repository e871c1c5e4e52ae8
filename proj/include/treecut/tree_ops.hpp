#pragma once

#include <string>
#include <vector>

#include "treecut/bnb.hpp"

namespace treecut {

/// Derived quantities of a completed tree used by the approximation
/// builders and the star-tree separation.
struct TreeSummary {
    /// Minimum dual bound over the leaves.
    double mu = 0.0;
    /// Node ids ordered by nonincreasing dual bound, ties by id.
    std::vector<int> phi;
    /// leaf_descendants[v] lists the leaf ids under v (v itself if a leaf),
    /// ascending.
    std::vector<std::vector<int>> leaf_descendants;

    /// Ancestors of v (inclusive) restricted to `subset`, path order.
    std::vector<int> ancestors_within(const BnbTree& tree, int v,
                                      const std::vector<int>& subset) const;
};

struct TreeDiagnostics {
    std::vector<std::string> issues;
    bool clean() const { return issues.empty(); }
};

/// Completion to a full binary tree: synthesizes missing siblings with the
/// parent's bound, replaces infinite bounds on infeasible leaves by the
/// finite surrogate L_max + (L_max - L_min + 1), and clamps every bound to
/// be at least the parent's. Idempotent.
BnbTree complete_tree(const BnbTree& tree);

/// Keeps nodes with depth <= floor(r_depth * d_max); cut nodes become
/// leaves with their own bounds. r_depth = 1 is the identity. The result
/// is re-completed.
BnbTree truncate_tree(const BnbTree& tree, double r_depth);

/// Structural checks: full binary shape, |V| = 2|L| - 1, bound
/// monotonicity, no repeated branch variable on a path, sibling pairs
/// branching the same variable with values {0,1}, and, for n_binary <=
/// max_partition_bits, the leaf-region partition of the binary cube by
/// exhaustive enumeration.
TreeDiagnostics validate_tree(const BnbTree& tree, int max_partition_bits = 15);

TreeSummary summarize(const BnbTree& tree);

/// Leaf of the completed tree whose fixings the binary assignment
/// satisfies. `assignment` holds one bit per binary variable.
int leaf_of_assignment(const BnbTree& tree, const std::vector<int>& assignment);

}  // namespace treecut
