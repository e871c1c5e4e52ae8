#include "treecut/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "treecut/tree_ops.hpp"

namespace treecut {

namespace {

constexpr int kMaxEnumerationBits = 20;
constexpr int kMaxStiNodes = 13;

// Minimizes `objective` over the continuous tail with the binaries pinned
// to `assignment`. Returns nothing if that slice is infeasible.
std::optional<std::vector<double>> continuous_completion(const MbpInstance& inst,
                                                         const std::vector<int>& assignment,
                                                         const std::vector<double>& objective) {
    LpProblem p = inst.relaxation();
    p.objective = objective;
    for (int j = 0; j < inst.n_binary; ++j) {
        p.lower_bounds[j] = assignment[j];
        p.upper_bounds[j] = assignment[j];
    }
    SimplexSolver solver;
    const LpSolution s = solver.solve(p);
    if (s.status != LpStatus::Optimal) return std::nullopt;
    return s.point;
}

bool binary_point_feasible(const MbpInstance& inst, const std::vector<int>& assignment) {
    for (const LpRow& r : inst.rows) {
        double act = 0.0;
        for (int j = 0; j < inst.n_binary; ++j) act += r.coeffs[j] * assignment[j];
        if (act < r.rhs - 1e-9) return false;
    }
    return true;
}

}  // namespace

EnumerationResult enumerate_feasible(const MbpInstance& instance) {
    if (instance.n_binary > kMaxEnumerationBits)
        throw SizeGuard("enumerate_feasible: too many binaries");

    EnumerationResult out;
    const bool pure_binary = instance.n_continuous() == 0;
    const long total = 1L << instance.n_binary;
    std::vector<int> assignment(instance.n_binary, 0);

    for (long mask = 0; mask < total; ++mask) {
        for (int j = 0; j < instance.n_binary; ++j)
            assignment[j] = static_cast<int>((mask >> j) & 1);

        std::vector<double> point;
        double value = 0.0;
        if (pure_binary) {
            if (!binary_point_feasible(instance, assignment)) continue;
            point.assign(assignment.begin(), assignment.end());
            for (int j = 0; j < instance.n; ++j) value += instance.objective[j] * point[j];
        } else {
            auto completed = continuous_completion(instance, assignment, instance.objective);
            if (!completed) continue;
            point = std::move(*completed);
            for (int j = 0; j < instance.n; ++j) value += instance.objective[j] * point[j];
        }
        if (!out.optimal_value || value < *out.optimal_value) {
            out.optimal_value = value;
            out.optimal_point = point;
        }
        out.feasible_points.push_back(std::move(point));
    }
    return out;
}

double audit_cut(const Cut& cut, const MbpInstance& instance) {
    if (instance.n_binary > kMaxEnumerationBits) throw SizeGuard("audit_cut: too many binaries");
    if (static_cast<int>(cut.pi.size()) != instance.n)
        throw DimensionMismatch("audit_cut: cut dimension mismatch");

    const bool pure_binary = instance.n_continuous() == 0;
    const long total = 1L << instance.n_binary;
    std::vector<int> assignment(instance.n_binary, 0);
    double worst = kInfinity;

    for (long mask = 0; mask < total; ++mask) {
        for (int j = 0; j < instance.n_binary; ++j)
            assignment[j] = static_cast<int>((mask >> j) & 1);
        if (pure_binary) {
            if (!binary_point_feasible(instance, assignment)) continue;
            double lhs = 0.0;
            for (int j = 0; j < instance.n; ++j) lhs += cut.pi[j] * assignment[j];
            worst = std::min(worst, lhs - cut.pi0);
        } else {
            auto completed = continuous_completion(instance, assignment, cut.pi);
            if (!completed) continue;
            double lhs = 0.0;
            for (int j = 0; j < instance.n; ++j) lhs += cut.pi[j] * (*completed)[j];
            worst = std::min(worst, lhs - cut.pi0);
        }
    }
    return worst;
}

std::vector<double> product_form_z(const BnbTree& tree, const std::vector<int>& assignment) {
    std::vector<double> z;
    for (const BnbNode& v : tree.nodes) {
        if (!v.children.empty()) continue;
        double prod = 1.0;
        for (auto [var, val] : tree.path_fixings(v.id)) {
            const double xi = assignment[var];
            prod *= (val == 1) ? xi : (1.0 - xi);
        }
        z.push_back(prod);
    }
    return z;
}

StiEnumeration enumerate_sti(const BnbTree& tree, std::span<const double> objective,
                             std::span<const double> x_bar) {
    const int nv = tree.size();
    if (nv > kMaxStiNodes) throw SizeGuard("enumerate_sti: tree too large");

    const TreeSummary s = summarize(tree);

    // Clipped fixing-violation mass per node, straight from the defining sums.
    std::vector<double> delta(nv, 0.0);
    for (const BnbNode& v : tree.nodes) {
        double sum = 0.0;
        for (auto [var, val] : tree.path_fixings(v.id))
            sum += (val == 1) ? (1.0 - x_bar[var]) : x_bar[var];
        delta[v.id] = std::min(1.0, sum);
    }

    double cx = 0.0;
    for (std::size_t j = 0; j < x_bar.size(); ++j) cx += objective[j] * x_bar[j];
    const auto bound_of = [&](int id) { return tree.nodes[id].dual_bound; };

    StiEnumeration best;
    if (nv == 1) {
        best.max_violation = bound_of(s.phi[0]) - cx;
        best.best_chain = {s.phi[0]};
        return best;
    }

    const int middle = nv - 2;  // positions 2 .. |V|-1
    const long subsets = 1L << middle;
    for (long mask = 0; mask < subsets; ++mask) {
        std::vector<int> chain{s.phi[0]};
        for (int i = 0; i < middle; ++i)
            if ((mask >> i) & 1) chain.push_back(s.phi[1 + i]);

        double rhs = bound_of(chain[0]);
        for (std::size_t j = 0; j < chain.size(); ++j) {
            const double next =
                (j + 1 < chain.size()) ? bound_of(chain[j + 1]) : bound_of(s.phi[nv - 1]);
            rhs -= (bound_of(chain[j]) - next) * delta[chain[j]];
        }
        const double violation = rhs - cx;
        if (violation > best.max_violation) {
            best.max_violation = violation;
            best.best_chain = chain;
        }
    }
    return best;
}

const char* to_string(CutSource s) {
    switch (s) {
        case CutSource::Obj: return "obj";
        case CutSource::Sti: return "sti";
        case CutSource::CglpO1: return "cglp-o1";
        case CutSource::CglpO2: return "cglp-o2";
        case CutSource::CglpO3: return "cglp-o3";
    }
    return "?";
}

}  // namespace treecut
