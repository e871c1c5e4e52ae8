#include "treecut/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace treecut {

namespace {
constexpr double kIntegralityTol = 1e-6;
constexpr double kPruneTol = 1e-9;
}  // namespace

const char* to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::Branched: return "Branched";
        case NodeStatus::IntegerFeasible: return "IntegerFeasible";
        case NodeStatus::Infeasible: return "Infeasible";
        case NodeStatus::PrunedByBound: return "PrunedByBound";
        case NodeStatus::CompletedSibling: return "CompletedSibling";
    }
    return "?";
}

NodeStatus node_status_from_string(const std::string& s) {
    if (s == "Branched") return NodeStatus::Branched;
    if (s == "IntegerFeasible") return NodeStatus::IntegerFeasible;
    if (s == "Infeasible") return NodeStatus::Infeasible;
    if (s == "PrunedByBound") return NodeStatus::PrunedByBound;
    if (s == "CompletedSibling") return NodeStatus::CompletedSibling;
    throw MalformedTree("unknown node status: " + s);
}

std::vector<std::pair<int, int>> BnbTree::path_fixings(int v) const {
    std::vector<std::pair<int, int>> out;
    for (int u = v; u >= 0 && !nodes[u].is_root(); u = nodes[u].parent)
        out.emplace_back(nodes[u].branch_var, nodes[u].branch_value);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<int> BnbTree::path_from_root(int v) const {
    std::vector<int> out;
    for (int u = v; u >= 0; u = nodes[u].parent) out.push_back(u);
    std::reverse(out.begin(), out.end());
    return out;
}

void BnbTree::recompute_children() {
    for (BnbNode& v : nodes) v.children.clear();
    for (const BnbNode& v : nodes)
        if (!v.is_root()) nodes[v.parent].children.push_back(v.id);
    for (BnbNode& v : nodes) std::sort(v.children.begin(), v.children.end());
}

void BnbTree::recompute_depths() {
    d_max = 0;
    for (BnbNode& v : nodes) {
        v.depth = v.is_root() ? 0 : nodes[v.parent].depth + 1;
        d_max = std::max(d_max, v.depth);
    }
}

namespace {

struct OpenEntry {
    double bound;
    long order;
    int node;
    bool operator>(const OpenEntry& o) const {
        if (bound != o.bound) return bound > o.bound;
        return order > o.order;
    }
};

struct Search {
    const MbpInstance& inst;
    const BnbLimits& limits;
    SimplexSolver solver;
    LpProblem scratch;
    BnbResult res;
    std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
    long push_order = 0;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Search(const MbpInstance& i, const BnbLimits& l) : inst(i), limits(l) {
        scratch = inst.relaxation();
        res.tree.instance_name = inst.name;
        res.tree.n_binary = inst.n_binary;
    }

    bool limit_hit() {
        if (res.tree.size() >= limits.node_limit) return true;
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return elapsed >= limits.time_limit_s;
    }

    LpSolution solve_node(int v) {
        const auto fixings = res.tree.path_fixings(v);
        for (auto [var, val] : fixings) {
            scratch.lower_bounds[var] = val;
            scratch.upper_bounds[var] = val;
        }
        LpSolution s = solver.solve(scratch);
        for (auto [var, val] : fixings) {
            scratch.lower_bounds[var] = 0.0;
            scratch.upper_bounds[var] = 1.0;
        }
        ++res.lp_solves;
        return s;
    }

    bool binaries_integral(const std::vector<double>& x) const {
        for (int j = 0; j < inst.n_binary; ++j)
            if (std::abs(x[j] - std::round(x[j])) > kIntegralityTol) return false;
        return true;
    }

    void maybe_update_incumbent(double value, const std::vector<double>& point) {
        if (!res.incumbent_value || value < *res.incumbent_value) {
            res.incumbent_value = value;
            res.incumbent_point = point;
        }
    }

    // Creates a node, solves its relaxation and classifies it. Open nodes
    // are pushed onto the best-first queue.
    int make_node(int parent, int var, int val) {
        BnbNode node;
        node.id = res.tree.size();
        node.parent = parent;
        node.branch_var = var;
        node.branch_value = val;
        node.depth = parent < 0 ? 0 : res.tree.nodes[parent].depth + 1;
        res.tree.nodes.push_back(std::move(node));
        if (parent >= 0) res.tree.nodes[parent].children.push_back(res.tree.nodes.back().id);

        BnbNode& v = res.tree.nodes.back();
        const LpSolution s = solve_node(v.id);
        if (s.status == LpStatus::Infeasible) {
            v.status = NodeStatus::Infeasible;
            v.dual_bound = kInfinity;
            return v.id;
        }
        if (s.status == LpStatus::Unbounded)
            throw NumericalFailure("bnb: node relaxation unbounded");

        v.dual_bound = s.objective_value;
        if (binaries_integral(s.point)) {
            v.status = NodeStatus::IntegerFeasible;
            maybe_update_incumbent(s.objective_value, s.point);
            return v.id;
        }
        if (res.incumbent_value && v.dual_bound >= *res.incumbent_value - kPruneTol) {
            v.status = NodeStatus::PrunedByBound;
            return v.id;
        }
        v.lp_point = s.point;
        open.push(OpenEntry{v.dual_bound, push_order++, v.id});
        return v.id;
    }

    // Most fractional unfixed binary; ties broken by lowest index.
    int pick_branch_var(int v) const {
        std::vector<char> fixed(inst.n_binary, 0);
        for (auto [var, val] : res.tree.path_fixings(v)) fixed[var] = 1;
        const std::vector<double>& x = res.tree.nodes[v].lp_point;
        int best = -1;
        double best_frac = -1.0;
        for (int j = 0; j < inst.n_binary; ++j) {
            if (fixed[j]) continue;
            const double frac = std::min(x[j], 1.0 - x[j]);
            if (frac > best_frac + 1e-15) {
                best_frac = frac;
                best = j;
            }
        }
        return best;
    }

    void run() {
        make_node(-1, -1, -1);
        while (!open.empty()) {
            if (limit_hit()) {
                res.limit_reached = true;
                break;
            }
            const OpenEntry top = open.top();
            open.pop();
            BnbNode& v = res.tree.nodes[top.node];
            if (res.incumbent_value && v.dual_bound >= *res.incumbent_value - kPruneTol) {
                v.status = NodeStatus::PrunedByBound;
                v.lp_point.clear();
                continue;
            }
            const int var = pick_branch_var(v.id);
            if (var < 0) {
                // All binaries fixed; the LP point is integral on them.
                v.status = NodeStatus::IntegerFeasible;
                maybe_update_incumbent(v.dual_bound, v.lp_point);
                v.lp_point.clear();
                continue;
            }
            v.status = NodeStatus::Branched;
            v.lp_point.clear();
            const int id = v.id;
            make_node(id, var, 0);
            make_node(id, var, 1);
        }
        if (res.limit_reached) {
            // Leftover open nodes stay as leaves; their bounds are valid for
            // their regions, so they are recorded like bound-pruned leaves.
            while (!open.empty()) {
                BnbNode& v = res.tree.nodes[open.top().node];
                open.pop();
                if (v.children.empty() && v.status == NodeStatus::Branched) {
                    v.status = NodeStatus::PrunedByBound;
                    v.lp_point.clear();
                }
            }
        } else {
            res.optimality_certified = true;
        }
        res.tree.recompute_depths();
        res.tree.incumbent_value = res.incumbent_value;
        res.tree.incumbent_point = res.incumbent_point;
    }
};

}  // namespace

BnbResult solve_bnb(const MbpInstance& instance, const BnbLimits& limits) {
    Search s(instance, limits);
    s.run();
    return s.res;
}

}  // namespace treecut
