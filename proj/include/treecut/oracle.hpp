#pragma once

#include <optional>
#include <span>
#include <vector>

#include "treecut/bnb.hpp"
#include "treecut/cut.hpp"
#include "treecut/model.hpp"

namespace treecut {

// Brute-force reference engines. These deliberately share no code with the
// solver paths they are used to audit; guards are hard errors because an
// approximate oracle is worse than none.

struct EnumerationResult {
    /// One entry per feasible binary assignment; continuous tails are
    /// optimized for the instance objective.
    std::vector<std::vector<double>> feasible_points;
    std::optional<double> optimal_value;  // canonical sense
    std::vector<double> optimal_point;
};

/// Exhaustive sweep over the binary cube (n_binary <= 20). Mixed instances
/// solve an LP over the continuous part per assignment.
EnumerationResult enumerate_feasible(const MbpInstance& instance);

/// Worst slack min_x pi'x - pi0 over the feasible set. The cut is valid
/// iff the result is >= -1e-6. Continuous tails are re-optimized against
/// pi, not the instance objective.
double audit_cut(const Cut& cut, const MbpInstance& instance);

/// Leaf indicator z of a binary point: z_v is the product of the fixing
/// terms on the path to leaf v. Exactly one entry is 1 on a completed
/// tree. Returned in leaf-id order.
std::vector<double> product_form_z(const BnbTree& tree, const std::vector<int>& assignment);

struct StiEnumeration {
    double max_violation = -kInfinity;
    std::vector<int> best_chain;  // node ids, starts at phi_1
};

/// Exhaustive star-tree chain search over all subsets of the middle
/// positions (|V| <= 13). Mirrors the definition used by the fast
/// separation: the chain starts at phi_1 and terminates at phi_{|V|}.
StiEnumeration enumerate_sti(const BnbTree& tree, std::span<const double> objective,
                             std::span<const double> x_bar);

}  // namespace treecut
