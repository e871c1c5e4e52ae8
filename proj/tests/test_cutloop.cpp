#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treecut/bnb.hpp"
#include "treecut/cutloop.hpp"
#include "treecut/model.hpp"
#include "treecut/oracle.hpp"
#include "treecut/rng.hpp"
#include "treecut/tree_ops.hpp"

using namespace treecut;

namespace {

struct Cell {
    MbpInstance inst;
    BnbTree tree;
    double opt = 0.0;  // canonical optimum of inst
};

Cell mkp_cell(int n, std::uint64_t seed) {
    Cell c;
    c.inst = generate_mkp(GeneratorConfig::for_size(n, seed));
    const BnbResult r = solve_bnb(c.inst);
    c.tree = complete_tree(r.tree);
    c.opt = *r.incumbent_value;
    return c;
}

}  // namespace

TEST_CASE("gap arithmetic") {
    CHECK(compute_gap(10.0, 10.0).value == 0.0);
    // A dual bound five percent above a max-sense optimum.
    const GapValue g = compute_gap(1.05 * 40.0, 40.0);
    CHECK(g.value == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_FALSE(g.zero_optimum);

    const GapValue z = compute_gap(0.5, 0.0);
    CHECK(z.zero_optimum);
    CHECK(z.value == 0.5);

    SplitMix64 rng(12);
    for (int i = 0; i < 100; ++i) {
        const double opt = rng.uniform(-10.0, 10.0);
        const double dual = opt + rng.uniform(-1.0, 1.0);
        if (std::abs(opt) < 1e-9) continue;
        CHECK(compute_gap(dual, opt).value ==
              doctest::Approx(std::abs(opt - dual) / std::abs(opt)).epsilon(1e-12));
    }
}

TEST_CASE("objective cut equals the optimum on a certifying tree") {
    const Cell c = mkp_cell(10, 3);
    const Cut cut = objective_cut(c.tree, c.inst);
    CHECK(cut.pi == c.inst.objective);
    CHECK(std::abs(cut.pi0 - c.opt) <= 1e-9);
    CHECK(audit_cut(cut, c.inst) >= -1e-9);
}

TEST_CASE("single node tree carries the root bound") {
    BnbTree t;
    t.n_binary = 2;
    BnbNode root;
    root.id = 0;
    root.dual_bound = -7.25;
    t.nodes = {root};
    const BnbTree done = complete_tree(t);
    const MbpInstance inst = canonicalize("t", Sense::Min, {1.0, 1.0}, {}, 2);
    CHECK(objective_cut(done, inst).pi0 == -7.25);
}

TEST_CASE("truncated tree bound never exceeds the full tree bound") {
    const Cell c = mkp_cell(10, 5);
    const double full = tree_dual_bound(c.tree);
    for (double r : {0.25, 0.5, 0.75}) {
        const BnbTree cut = truncate_tree(c.tree, r);
        CHECK(tree_dual_bound(cut) <= full + 1e-9);
    }
}

TEST_CASE("objective separator adds at most one effective cut") {
    const Cell c = mkp_cell(10, 4);
    // Zero perturbation: identical objective, so the final value must be
    // exactly max(lp bound, tree bound) in the canonical sense.
    const CutLoopResult r =
        run_cutting_plane(c.inst, c.tree, c.inst, SeparatorKind::Obj, c.opt);
    CHECK(r.cuts_added <= 1);
    CHECK_FALSE(r.timed_out);
    CHECK_FALSE(r.numerical_failure);

    SimplexSolver solver;
    const double lp = solver.solve(c.inst.relaxation()).objective_value;
    const double expect = std::max(lp, tree_dual_bound(c.tree));
    const double canonical_bound =
        c.inst.original_sense == Sense::Max ? -r.dual_bound : r.dual_bound;
    CHECK(std::abs(canonical_bound - expect) <= 1e-7);
}

TEST_CASE("loops are deterministic given identical inputs") {
    const Cell c = mkp_cell(10, 6);
    const MbpInstance pert = perturb_objective(c.inst, 11);
    const double popt = *solve_bnb(pert).incumbent_value;
    const CutLoopResult a =
        run_cutting_plane(pert, c.tree, c.inst, SeparatorKind::Sti, popt);
    const CutLoopResult b =
        run_cutting_plane(pert, c.tree, c.inst, SeparatorKind::Sti, popt);
    CHECK(a.dual_bound == b.dual_bound);
    CHECK(a.cuts_added == b.cuts_added);
    CHECK(a.iterations == b.iterations);
    CHECK(a.gap.value == b.gap.value);
}

TEST_CASE("bounds improve monotonically and cuts never remove feasible points") {
    const Cell c = mkp_cell(10, 7);
    const MbpInstance pert = perturb_objective(c.inst, 21);
    const double popt = *solve_bnb(pert).incumbent_value;
    const EnumerationResult feas = enumerate_feasible(pert);

    for (SeparatorKind kind : {SeparatorKind::Obj, SeparatorKind::Sti, SeparatorKind::CglpO2,
                               SeparatorKind::CglpO1, SeparatorKind::CglpO3}) {
        const CutLoopResult r = run_cutting_plane(pert, c.tree, c.inst, kind, popt);
        REQUIRE_FALSE(r.numerical_failure);
        for (std::size_t i = 1; i < r.bound_trace.size(); ++i)
            CHECK(r.bound_trace[i] >= r.bound_trace[i - 1] - 1e-9);
        for (const Cut& cut : r.cuts)
            CHECK(audit_cut(cut, pert) >= -1e-6);
        // No two accepted cuts are near-identical.
        for (std::size_t i = 0; i < r.cuts.size(); ++i)
            for (std::size_t j = i + 1; j < r.cuts.size(); ++j) {
                double dpi = std::abs(r.cuts[i].pi0 - r.cuts[j].pi0);
                for (std::size_t k = 0; k < r.cuts[i].pi.size(); ++k)
                    dpi = std::max(dpi, std::abs(r.cuts[i].pi[k] - r.cuts[j].pi[k]));
                CHECK(dpi > 1e-9);
            }
        (void)feas;
    }
}

TEST_CASE("per-instance gap hierarchy at full depth") {
    for (std::uint64_t seed : {3ull, 5ull}) {
        const Cell c = mkp_cell(10, seed);
        for (std::uint64_t pseed : {1ull, 2ull}) {
            const MbpInstance pert = perturb_objective(c.inst, pseed);
            const double popt = *solve_bnb(pert).incumbent_value;
            const auto run = [&](SeparatorKind k) {
                const CutLoopResult r = run_cutting_plane(pert, c.tree, c.inst, k, popt);
                REQUIRE_FALSE(r.numerical_failure);
                REQUIRE_FALSE(r.timed_out);
                return r.gap.value;
            };
            const double g_obj = run(SeparatorKind::Obj);
            const double g_sti = run(SeparatorKind::Sti);
            const double g_o2 = run(SeparatorKind::CglpO2);
            const double g_o1 = run(SeparatorKind::CglpO1);
            CHECK(g_o1 <= g_o2 + 1e-6);
            CHECK(g_o2 <= g_sti + 1e-6);
            CHECK(g_sti <= g_obj + 1e-6);
        }
    }
}
