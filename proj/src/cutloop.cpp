#include "treecut/cutloop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>

#include "treecut/approx.hpp"
#include "treecut/cglp.hpp"
#include "treecut/sti.hpp"
#include "treecut/tree_ops.hpp"

namespace treecut {

const char* to_string(SeparatorKind k) {
    switch (k) {
        case SeparatorKind::Obj: return "obj";
        case SeparatorKind::Sti: return "sti";
        case SeparatorKind::CglpO1: return "cglp-o1";
        case SeparatorKind::CglpO2: return "cglp-o2";
        case SeparatorKind::CglpO3: return "cglp-o3";
    }
    return "?";
}

std::optional<SeparatorKind> separator_from_string(const std::string& s) {
    if (s == "obj") return SeparatorKind::Obj;
    if (s == "sti") return SeparatorKind::Sti;
    if (s == "cglp-o1") return SeparatorKind::CglpO1;
    if (s == "cglp-o2") return SeparatorKind::CglpO2;
    if (s == "cglp-o3") return SeparatorKind::CglpO3;
    return std::nullopt;
}

GapValue compute_gap(double l_dual, double l_opt) {
    GapValue g;
    const double diff = std::abs(l_opt - l_dual);
    if (std::abs(l_opt) < 1e-12) {
        g.zero_optimum = true;
        g.value = diff;
    } else {
        g.value = diff / std::abs(l_opt);
    }
    return g;
}

double tree_dual_bound(const BnbTree& tree) {
    double mu = kInfinity;
    for (const BnbNode& v : tree.nodes)
        if (v.children.empty()) mu = std::min(mu, v.dual_bound);
    return mu;
}

Cut objective_cut(const BnbTree& tree, const MbpInstance& instance) {
    Cut cut;
    cut.source = CutSource::Obj;
    cut.pi = instance.objective;
    cut.pi0 = tree_dual_bound(tree);
    return cut;
}

namespace {

bool nearly_same_cut(const Cut& a, const Cut& b) {
    if (a.pi.size() != b.pi.size()) return false;
    if (std::abs(a.pi0 - b.pi0) > 1e-9) return false;
    for (std::size_t j = 0; j < a.pi.size(); ++j)
        if (std::abs(a.pi[j] - b.pi[j]) > 1e-9) return false;
    return true;
}

}  // namespace

CutLoopResult run_cutting_plane(const MbpInstance& perturbed, const BnbTree& tree,
                                const MbpInstance& original, SeparatorKind kind,
                                double optimal_value_canonical, const CutLoopLimits& limits) {
    CutLoopResult res;
    res.optimal_value = perturbed.to_original_sense(optimal_value_canonical);

    const auto t0 = std::chrono::steady_clock::now();
    const auto deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(limits.time_limit_s));
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    SimplexOptions lp_opts;
    lp_opts.deadline = deadline;
    const SimplexSolver solver(lp_opts);

    double last_bound = -kInfinity;
    try {
        // Timed setup: the per-tree separator state counts against the
        // budget, mirroring a build-once reuse-everywhere loop.
        std::unique_ptr<CglpSeparator> cglp;
        std::optional<Cut> obj_cut;
        switch (kind) {
            case SeparatorKind::Obj:
                obj_cut = objective_cut(tree, original);
                break;
            case SeparatorKind::Sti:
                break;  // per-point work only
            case SeparatorKind::CglpO1:
                cglp = std::make_unique<CglpSeparator>(build_O1_lin(tree, original),
                                                       CutSource::CglpO1);
                break;
            case SeparatorKind::CglpO2:
                cglp = std::make_unique<CglpSeparator>(build_O2_lin(tree, original),
                                                       CutSource::CglpO2);
                break;
            case SeparatorKind::CglpO3:
                cglp = std::make_unique<CglpSeparator>(build_O3_lin(tree, original),
                                                       CutSource::CglpO3);
                break;
        }

        LpProblem lp = perturbed.relaxation();
        while (true) {
            if (res.iterations >= limits.max_iters) break;
            if (elapsed() >= limits.time_limit_s) {
                res.timed_out = true;
                break;
            }
            const LpSolution s = solver.solve(lp);
            ++res.iterations;
            if (s.status != LpStatus::Optimal)
                throw NumericalFailure("cut loop: relaxation not optimal");
            last_bound = s.objective_value;
            res.bound_trace.push_back(s.objective_value);

            std::optional<Cut> next;
            switch (kind) {
                case SeparatorKind::Obj: {
                    if (obj_cut &&
                        obj_cut->violation_at(s.point) > limits.violation_tol) {
                        next = *obj_cut;
                        obj_cut.reset();  // at most one effective cut
                    }
                    break;
                }
                case SeparatorKind::Sti: {
                    auto r = separate_sti(tree, original.objective, s.point,
                                          limits.violation_tol);
                    if (r) next = std::move(r->cut);
                    break;
                }
                default: {
                    auto r = cglp->separate(s.point, limits.violation_tol, solver);
                    if (r) next = std::move(r->cut);
                    break;
                }
            }
            if (!next) break;  // converged at this family's tolerance

            bool duplicate = false;
            for (const Cut& c : res.cuts) duplicate |= nearly_same_cut(c, *next);
            if (duplicate) break;  // separator is stalled, stop honestly

            next->generation_index = res.cuts_added++;
            lp.add_row(next->pi, Relation::GE, next->pi0);
            res.cuts.push_back(std::move(*next));
        }
    } catch (const TimeLimitExceeded&) {
        res.timed_out = true;
    } catch (const NumericalFailure& e) {
        res.numerical_failure = true;
        res.failure_message = e.what();
    } catch (const std::bad_alloc&) {
        res.numerical_failure = true;
        res.failure_message = "cut loop: formulation too large for memory";
    }

    res.wall_time_s = elapsed();
    if (last_bound == -kInfinity) {
        // Never completed a solve; fall back to the plain relaxation value
        // computed outside the timed window so the row is still reportable.
        SimplexSolver plain;
        const LpSolution s = plain.solve(perturbed.relaxation());
        last_bound = s.status == LpStatus::Optimal ? s.objective_value : -kInfinity;
    }
    res.dual_bound = perturbed.to_original_sense(last_bound);
    res.gap = compute_gap(res.dual_bound, res.optimal_value);
    return res;
}

}  // namespace treecut
