#include "treecut/tree_ops.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace treecut {

std::vector<int> TreeSummary::ancestors_within(const BnbTree& tree, int v,
                                               const std::vector<int>& subset) const {
    std::vector<char> mark(tree.size(), 0);
    for (int u : subset) mark[u] = 1;
    std::vector<int> out;
    for (int u : tree.path_from_root(v))
        if (mark[u]) out.push_back(u);
    return out;
}

BnbTree complete_tree(const BnbTree& tree) {
    BnbTree out = tree;
    out.recompute_children();

    // Synthesize missing siblings. Parents always precede children in id
    // order, and appended nodes only ever become leaves.
    for (int v = 0; v < out.size(); ++v) {
        if (out.nodes[v].children.size() == 1) {
            const BnbNode& only = out.nodes[out.nodes[v].children[0]];
            BnbNode sib;
            sib.id = out.size();
            sib.parent = v;
            sib.branch_var = only.branch_var;
            sib.branch_value = 1 - only.branch_value;
            sib.status = NodeStatus::CompletedSibling;
            sib.dual_bound = out.nodes[v].dual_bound;
            out.nodes.push_back(sib);
            out.nodes[v].children.push_back(sib.id);
        } else if (out.nodes[v].children.size() > 2) {
            throw MalformedTree("complete_tree: node with more than two children");
        }
    }

    // Finite surrogate for infeasible leaves: any finite value is a valid
    // bound over an empty region; a value above every real bound keeps the
    // later formulations well posed while never becoming the leaf minimum.
    double lmin = kInfinity, lmax = -kInfinity;
    for (const BnbNode& v : out.nodes) {
        if (std::isfinite(v.dual_bound)) {
            lmin = std::min(lmin, v.dual_bound);
            lmax = std::max(lmax, v.dual_bound);
        }
    }
    if (!std::isfinite(lmin)) {
        lmin = 0.0;
        lmax = 0.0;
    }
    const double surrogate = lmax + (lmax - lmin + 1.0);
    for (BnbNode& v : out.nodes)
        if (!std::isfinite(v.dual_bound)) v.dual_bound = surrogate;

    // Upward clamp; LP noise can leave a child a hair below its parent.
    for (BnbNode& v : out.nodes)
        if (!v.is_root())
            v.dual_bound = std::max(v.dual_bound, out.nodes[v.parent].dual_bound);

    out.recompute_depths();
    out.completed = true;
    return out;
}

BnbTree truncate_tree(const BnbTree& tree, double r_depth) {
    if (!(r_depth > 0.0 && r_depth <= 1.0))
        throw MalformedTree("truncate_tree: depth ratio outside (0,1]");
    const int cut = static_cast<int>(std::floor(r_depth * tree.d_max));

    BnbTree out;
    out.root_id = tree.root_id;
    out.instance_name = tree.instance_name;
    out.n_binary = tree.n_binary;
    out.incumbent_value = tree.incumbent_value;
    out.incumbent_point = tree.incumbent_point;

    std::vector<int> new_id(tree.size(), -1);
    for (const BnbNode& v : tree.nodes) {
        if (v.depth > cut) continue;
        BnbNode w = v;
        w.children.clear();
        w.lp_point.clear();
        w.id = static_cast<int>(out.nodes.size());
        w.parent = v.is_root() ? -1 : new_id[v.parent];
        new_id[v.id] = w.id;
        out.nodes.push_back(std::move(w));
    }
    out.recompute_children();
    out.recompute_depths();
    return complete_tree(out);
}

namespace {

void check_partition(const BnbTree& tree, TreeDiagnostics& diag) {
    const int nb = tree.n_binary;
    std::vector<long> hits(tree.size(), 0);
    std::vector<int> assignment(nb, 0);
    const long total = 1L << nb;
    for (long mask = 0; mask < total; ++mask) {
        for (int j = 0; j < nb; ++j) assignment[j] = static_cast<int>((mask >> j) & 1);
        const int leaf = leaf_of_assignment(tree, assignment);
        if (leaf < 0) {
            diag.issues.push_back("partition: assignment without a matching leaf");
            return;
        }
        ++hits[leaf];
    }
    for (const BnbNode& v : tree.nodes) {
        if (!v.children.empty()) continue;
        const int fixed = static_cast<int>(tree.path_fixings(v.id).size());
        const long expect = 1L << (nb - fixed);
        if (hits[v.id] != expect)
            diag.issues.push_back("partition: leaf " + std::to_string(v.id) + " covers " +
                                  std::to_string(hits[v.id]) + " assignments, expected " +
                                  std::to_string(expect));
    }
}

}  // namespace

TreeDiagnostics validate_tree(const BnbTree& tree, int max_partition_bits) {
    TreeDiagnostics diag;
    if (tree.nodes.empty()) {
        diag.issues.push_back("empty tree");
        return diag;
    }

    int leaves = 0;
    for (const BnbNode& v : tree.nodes) {
        const std::size_t nc = v.children.size();
        if (nc != 0 && nc != 2)
            diag.issues.push_back("shape: node " + std::to_string(v.id) + " has " +
                                  std::to_string(nc) + " children");
        if (nc == 0) ++leaves;
        if (!v.is_root()) {
            if (v.dual_bound < tree.nodes[v.parent].dual_bound - 1e-12)
                diag.issues.push_back("monotonicity: node " + std::to_string(v.id) +
                                      " below its parent bound");
            if (v.branch_var < 0 || (v.branch_value != 0 && v.branch_value != 1))
                diag.issues.push_back("branching: node " + std::to_string(v.id) +
                                      " has no valid fixing");
        }
        if (nc == 2) {
            const BnbNode& a = tree.nodes[v.children[0]];
            const BnbNode& b = tree.nodes[v.children[1]];
            if (a.branch_var != b.branch_var)
                diag.issues.push_back("siblings: children of " + std::to_string(v.id) +
                                      " branch different variables");
            if (a.branch_value + b.branch_value != 1)
                diag.issues.push_back("siblings: children of " + std::to_string(v.id) +
                                      " do not take values {0,1}");
        }
    }
    if (tree.size() != 2 * leaves - 1)
        diag.issues.push_back("count: |V| = " + std::to_string(tree.size()) + " but 2|L|-1 = " +
                              std::to_string(2 * leaves - 1));

    // No repeated branch variable along any root-to-node path.
    for (const BnbNode& v : tree.nodes) {
        if (!v.children.empty()) continue;
        std::set<int> seen;
        for (auto [var, val] : tree.path_fixings(v.id)) {
            if (!seen.insert(var).second) {
                diag.issues.push_back("path: variable " + std::to_string(var) +
                                      " fixed twice on the way to " + std::to_string(v.id));
                break;
            }
        }
    }

    if (diag.clean() && tree.n_binary <= max_partition_bits) check_partition(tree, diag);
    return diag;
}

TreeSummary summarize(const BnbTree& tree) {
    TreeSummary s;
    s.phi.resize(tree.size());
    for (int i = 0; i < tree.size(); ++i) s.phi[i] = i;
    std::stable_sort(s.phi.begin(), s.phi.end(), [&](int a, int b) {
        if (tree.nodes[a].dual_bound != tree.nodes[b].dual_bound)
            return tree.nodes[a].dual_bound > tree.nodes[b].dual_bound;
        return a < b;
    });

    s.leaf_descendants.assign(tree.size(), {});
    s.mu = kInfinity;
    for (const BnbNode& v : tree.nodes) {
        if (!v.children.empty()) continue;
        s.mu = std::min(s.mu, v.dual_bound);
        for (int u = v.id; u >= 0; u = tree.nodes[u].parent)
            s.leaf_descendants[u].push_back(v.id);
    }
    // Leaves were visited in id order, so each list is already sorted.
    return s;
}

int leaf_of_assignment(const BnbTree& tree, const std::vector<int>& assignment) {
    int v = tree.root_id;
    while (!tree.nodes[v].children.empty()) {
        const BnbNode& c0 = tree.nodes[tree.nodes[v].children[0]];
        const BnbNode& c1 = tree.nodes[tree.nodes[v].children[1]];
        const int var = c0.branch_var;
        if (var < 0 || var >= static_cast<int>(assignment.size())) return -1;
        const int want = assignment[var];
        if (c0.branch_value == want)
            v = c0.id;
        else if (c1.branch_value == want)
            v = c1.id;
        else
            return -1;
    }
    // Verify the full fixing set, not just the descent choices.
    for (auto [var, val] : tree.path_fixings(v))
        if (assignment[var] != val) return -1;
    return v;
}

}  // namespace treecut
