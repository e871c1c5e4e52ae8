#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "treecut/lp.hpp"
#include "treecut/model.hpp"

namespace treecut {

enum class NodeStatus {
    Branched,
    IntegerFeasible,
    Infeasible,
    PrunedByBound,
    CompletedSibling,
};

const char* to_string(NodeStatus s);
NodeStatus node_status_from_string(const std::string& s);

struct BnbNode {
    int id = 0;
    int parent = -1;       // -1 for the root
    int branch_var = -1;   // variable fixed on the edge from the parent
    int branch_value = -1; // 0 or 1; -1 for the root
    int depth = 0;
    NodeStatus status = NodeStatus::Branched;
    /// Lower bound on the node subproblem, canonical (min) sense.
    /// +inf on infeasible leaves until tree completion substitutes the
    /// finite surrogate.
    double dual_bound = 0.0;
    std::vector<int> children;      // 0 or 2 entries, not serialized
    std::vector<double> lp_point;   // kept while a node is open, then cleared

    bool is_root() const { return parent < 0; }
};

/// Recorded search tree. Node ids are vector indices; parents always have
/// smaller ids than their children.
struct BnbTree {
    std::vector<BnbNode> nodes;
    int root_id = 0;
    int d_max = 0;
    std::optional<double> incumbent_value;  // canonical sense
    std::vector<double> incumbent_point;
    std::string instance_name;
    int n_binary = 0;
    bool completed = false;  // set by complete_tree

    int size() const { return static_cast<int>(nodes.size()); }

    std::vector<int> leaf_ids() const {
        std::vector<int> out;
        for (const BnbNode& v : nodes)
            if (v.children.empty()) out.push_back(v.id);
        return out;
    }

    /// Variable fixings accumulated on the path root -> v, as
    /// (variable, value) pairs in path order.
    std::vector<std::pair<int, int>> path_fixings(int v) const;

    /// Nodes on the path root -> v inclusive, root first.
    std::vector<int> path_from_root(int v) const;

    void recompute_children();
    void recompute_depths();
};

struct BnbLimits {
    long node_limit = 2'000'000;
    double time_limit_s = std::numeric_limits<double>::infinity();
};

struct BnbResult {
    BnbTree tree;
    std::optional<double> incumbent_value;  // canonical sense
    std::vector<double> incumbent_point;
    bool limit_reached = false;
    /// True when the search emptied its open list, so the incumbent is the
    /// exact optimum (or the instance was proven infeasible).
    bool optimality_certified = false;
    long lp_solves = 0;
};

/// Minimalist recording branch and bound: best-first node selection (ties
/// by insertion order), branching on the most fractional unfixed binary
/// (ties by lowest index), dual bounds from the LP relaxation, no cuts, no
/// heuristics. Every explored node stays in the tree.
BnbResult solve_bnb(const MbpInstance& instance, const BnbLimits& limits = {});

}  // namespace treecut
