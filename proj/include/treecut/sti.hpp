#pragma once

#include <optional>
#include <span>
#include <vector>

#include "treecut/bnb.hpp"
#include "treecut/cut.hpp"
#include "treecut/tree_ops.hpp"

namespace treecut {

/// Per-node clipped fixing-violation mass of a point:
///   delta_v = min(1, sum over ones-fixings (1 - x_i) + sum over
///   zero-fixings x_i),
/// computed along parent edges in O(|V|). `raw` keeps the unclipped sums,
/// which decide the linearization branch during materialization.
struct StiContext {
    const BnbTree* tree = nullptr;
    std::vector<double> delta;
    std::vector<double> raw;
    std::vector<double> x_bar;
};

StiContext compute_deltas(const BnbTree& tree, std::span<const double> x_bar);

/// Chain of node ids defining one star-tree inequality. The first entry is
/// always the top node of the bound ordering; the terminal bound is the
/// last node of that ordering and is implicit.
struct StiChain {
    std::vector<int> nodes;
};

/// Turns a chain into a linear cut: each clipped term is replaced by its
/// defining sum when that sum is at most one at x_bar, and by the constant
/// one otherwise. The cut's violation at x_bar equals the chain objective.
Cut materialize_sti(const StiContext& ctx, const StiChain& chain,
                    std::span<const double> objective);

struct StiSeparation {
    Cut cut;
    StiChain chain;
    double violation = 0.0;
};

/// Most violated star-tree inequality via shortest path on the
/// bound-sorted DAG, O(|V|^2). Nodes tied on the bound keep only their
/// minimal-delta representative, which cannot change the optimum. Returns
/// nothing when the best violation is at most tol.
std::optional<StiSeparation> separate_sti(const BnbTree& tree, std::span<const double> objective,
                                          std::span<const double> x_bar, double tol);

/// Best chain value even when below tol (used by tests and the closure
/// check).
StiSeparation best_sti_chain(const BnbTree& tree, std::span<const double> objective,
                             std::span<const double> x_bar);

/// True iff x_bar satisfies every star-tree inequality of the tree, by
/// exhaustive chain enumeration. Guarded to |V| <= 13.
bool sti_closure_check(const BnbTree& tree, std::span<const double> objective,
                       std::span<const double> x_bar, double tol = 1e-7);

}  // namespace treecut
