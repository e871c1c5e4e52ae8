#include "treecut/sti.hpp"

#include <algorithm>
#include <cmath>

#include "treecut/oracle.hpp"

namespace treecut {

StiContext compute_deltas(const BnbTree& tree, std::span<const double> x_bar) {
    StiContext ctx;
    ctx.tree = &tree;
    ctx.x_bar.assign(x_bar.begin(), x_bar.end());
    ctx.delta.assign(tree.size(), 0.0);
    ctx.raw.assign(tree.size(), 0.0);

    // Parents precede children in id order.
    for (const BnbNode& v : tree.nodes) {
        if (v.is_root()) continue;
        const double term =
            v.branch_value == 1 ? (1.0 - x_bar[v.branch_var]) : x_bar[v.branch_var];
        ctx.raw[v.id] = ctx.raw[v.parent] + term;
        ctx.delta[v.id] = std::min(1.0, ctx.delta[v.parent] + term);
    }
    return ctx;
}

// The chain inequalities are mixing inequalities of the rows
// c'x + (mu - l_v) z_v >= mu with l_v >= mu, strengthened by the path
// lower bound on z. Their base level, and the value every term collapses
// to when a chain node is fully charged, is mu: the minimum leaf bound.
// Only nodes with bounds at or above mu can carry a chain coefficient.
std::vector<int> sti_candidates(const BnbTree& tree, const TreeSummary& summary) {
    std::vector<int> cand;
    for (int id : summary.phi) {
        if (tree.nodes[id].dual_bound < summary.mu) break;  // phi is sorted
        cand.push_back(id);
    }
    return cand;
}

Cut materialize_sti(const StiContext& ctx, const StiChain& chain,
                    std::span<const double> objective) {
    const BnbTree& tree = *ctx.tree;
    const TreeSummary summary = summarize(tree);

    Cut cut;
    cut.source = CutSource::Sti;
    cut.pi.assign(objective.begin(), objective.end());
    cut.pi0 = tree.nodes[chain.nodes.front()].dual_bound;

    for (std::size_t j = 0; j < chain.nodes.size(); ++j) {
        const int t = chain.nodes[j];
        const double next = (j + 1 < chain.nodes.size())
                                ? tree.nodes[chain.nodes[j + 1]].dual_bound
                                : summary.mu;
        const double coef = tree.nodes[t].dual_bound - next;
        if (coef == 0.0) continue;
        if (ctx.raw[t] <= 1.0) {
            // Linear branch: coef * (|ones| - sum_ones x + sum_zeros x).
            int ones = 0;
            for (auto [var, val] : tree.path_fixings(t)) {
                if (val == 1) {
                    cut.pi[var] -= coef;  // -coef * (1 - x) folds into pi and pi0
                    ++ones;
                } else {
                    cut.pi[var] += coef;
                }
            }
            cut.pi0 -= coef * ones;
        } else {
            cut.pi0 -= coef;
        }
    }
    cut.violation_at_generation = cut.violation_at(ctx.x_bar);
    return cut;
}

namespace {

struct DpResult {
    double best_rhs = 0.0;
    StiChain chain;
};

DpResult run_chain_dp(const BnbTree& tree, const TreeSummary& summary,
                      const std::vector<int>& cand, const StiContext& ctx) {
    const int nc = static_cast<int>(cand.size());
    const auto bound = [&](int pos) { return tree.nodes[cand[pos]].dual_bound; };

    DpResult out;
    if (nc == 1) {
        // Single candidate: the chain is just that node, terminal at mu.
        out.best_rhs = bound(0) - (bound(0) - summary.mu) * ctx.delta[cand[0]];
        out.chain.nodes = {cand[0]};
        return out;
    }

    // Among positions sharing one bound value only the minimal-delta node
    // can matter, since chain costs charge (bound gap) * delta of the
    // earlier node.
    std::vector<int> kept;
    kept.push_back(0);
    int pos = 1;
    while (pos < nc) {
        int best = pos;
        int q = pos;
        for (; q < nc && bound(q) == bound(pos); ++q)
            if (ctx.delta[cand[q]] < ctx.delta[cand[best]]) best = q;
        kept.push_back(best);
        pos = q;
    }

    // Shortest path from the top node to the virtual mu terminal.
    const int k = static_cast<int>(kept.size());
    std::vector<double> dist(k + 1, kInfinity);
    std::vector<int> pred(k + 1, -1);
    dist[0] = 0.0;
    for (int b = 1; b <= k; ++b) {
        const double lb_val = (b == k) ? summary.mu : bound(kept[b]);
        for (int a = 0; a < std::min(b, k); ++a) {
            if (dist[a] >= kInfinity) continue;
            const double w = (bound(kept[a]) - lb_val) * ctx.delta[cand[kept[a]]];
            if (dist[a] + w < dist[b]) {
                dist[b] = dist[a] + w;
                pred[b] = a;
            }
        }
    }

    out.best_rhs = bound(0) - dist[k];
    std::vector<int> path;
    for (int at = pred[k]; at >= 0; at = pred[at]) path.push_back(kept[at]);
    std::reverse(path.begin(), path.end());
    for (int p : path) out.chain.nodes.push_back(cand[p]);
    if (out.chain.nodes.empty()) out.chain.nodes.push_back(cand[0]);
    return out;
}

}  // namespace

StiSeparation best_sti_chain(const BnbTree& tree, std::span<const double> objective,
                             std::span<const double> x_bar) {
    const StiContext ctx = compute_deltas(tree, x_bar);
    const TreeSummary summary = summarize(tree);
    const std::vector<int> cand = sti_candidates(tree, summary);
    const DpResult dp = run_chain_dp(tree, summary, cand, ctx);

    double cx = 0.0;
    for (std::size_t j = 0; j < x_bar.size(); ++j) cx += objective[j] * x_bar[j];

    StiSeparation sep;
    sep.chain = dp.chain;
    sep.violation = dp.best_rhs - cx;
    sep.cut = materialize_sti(ctx, dp.chain, objective);
    return sep;
}

std::optional<StiSeparation> separate_sti(const BnbTree& tree, std::span<const double> objective,
                                          std::span<const double> x_bar, double tol) {
    StiSeparation sep = best_sti_chain(tree, objective, x_bar);
    if (sep.violation <= tol) return std::nullopt;
    return sep;
}

bool sti_closure_check(const BnbTree& tree, std::span<const double> objective,
                       std::span<const double> x_bar, double tol) {
    const StiEnumeration e = enumerate_sti(tree, objective, x_bar);
    return e.max_violation <= tol;
}

}  // namespace treecut
