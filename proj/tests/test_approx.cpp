#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treecut/approx.hpp"
#include "treecut/bnb.hpp"
#include "treecut/model.hpp"
#include "treecut/oracle.hpp"
#include "treecut/rng.hpp"
#include "treecut/tree_ops.hpp"

using namespace treecut;

namespace {

struct Fixture {
    MbpInstance inst;
    BnbTree tree;
};

Fixture mkp_fixture(int n, std::uint64_t seed) {
    Fixture f;
    f.inst = generate_mkp(GeneratorConfig::for_size(n, seed));
    f.tree = complete_tree(solve_bnb(f.inst).tree);
    return f;
}

BnbTree single_node_tree(double bound, int n_binary) {
    BnbTree t;
    t.n_binary = n_binary;
    BnbNode root;
    root.id = 0;
    root.dual_bound = bound;
    root.status = NodeStatus::IntegerFeasible;
    t.nodes = {root};
    return complete_tree(t);
}

}  // namespace

TEST_CASE("atom of the root-only tree has the documented row count") {
    const MbpInstance inst = generate_mkp(GeneratorConfig::for_size(6, 3));
    const BnbTree t = single_node_tree(-4.0, inst.n_binary);
    const AtomSystem atom = build_atom(t, inst, 0);
    CHECK(atom.k() == 1 + 2 * inst.n_binary + inst.finite_bound_count());
    // First row is the local bound row.
    CHECK(atom.d[0] == inst.objective);
    CHECK(atom.f[0] == -4.0);
}

TEST_CASE("atom rows encode fixings by tightened bound pairs") {
    const Fixture f = mkp_fixture(8, 4);
    int checked = 0;
    for (int leaf : f.tree.leaf_ids()) {
        if (f.tree.nodes[leaf].status == NodeStatus::Infeasible) continue;
        const AtomSystem atom = build_atom(f.tree, f.inst, leaf);
        CHECK(atom.k() == 1 + 2 * f.inst.n_binary);
        for (auto [var, val] : f.tree.path_fixings(leaf)) {
            // Bound pair for var sits at rows 1 + 2*var (lower) and +1 (upper).
            CHECK(atom.f[1 + 2 * var] == (val == 1 ? 1.0 : 0.0));
            CHECK(atom.f[2 + 2 * var] == (val == 0 ? 0.0 : -1.0));
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("atoms contain the oracle-feasible points of their region") {
    const Fixture f = mkp_fixture(8, 5);
    const EnumerationResult e = enumerate_feasible(f.inst);
    for (const auto& x : e.feasible_points) {
        std::vector<int> bits(f.inst.n_binary);
        for (int j = 0; j < f.inst.n_binary; ++j) bits[j] = static_cast<int>(std::lround(x[j]));
        const int leaf = leaf_of_assignment(f.tree, bits);
        REQUIRE(leaf >= 0);
        if (f.tree.nodes[leaf].status == NodeStatus::Infeasible) continue;
        const AtomSystem atom = build_atom(f.tree, f.inst, leaf);
        CHECK(atom.contains(x, 1e-9));
    }
}

TEST_CASE("excluded leaves are rejected") {
    // Build a tree with an infeasible leaf by hand.
    BnbTree t;
    t.n_binary = 2;
    BnbNode root;
    root.id = 0;
    root.dual_bound = 0.0;
    t.nodes = {root};
    for (int val = 0; val <= 1; ++val) {
        BnbNode c;
        c.id = t.size();
        c.parent = 0;
        c.branch_var = 0;
        c.branch_value = val;
        c.dual_bound = val == 0 ? 0.5 : kInfinity;
        c.status = val == 0 ? NodeStatus::IntegerFeasible : NodeStatus::Infeasible;
        t.nodes.push_back(c);
    }
    t.recompute_children();
    const BnbTree done = complete_tree(t);
    const MbpInstance inst = canonicalize("t", Sense::Min, {1.0, 1.0}, {}, 2);
    CHECK_THROWS_AS(build_atom(done, inst, 2), ExcludedLeaf);
    const Polyhedron o1 = build_O1_lin(done, inst);
    CHECK(o1.n_z == 1 * (inst.n + 1));  // only the feasible leaf participates
}

TEST_CASE("O1 auxiliary count and single-leaf projection") {
    const MbpInstance inst = generate_mkp(GeneratorConfig::for_size(6, 7));
    const BnbTree t = single_node_tree(-3.5, inst.n_binary);
    const Polyhedron o1 = build_O1_lin(t, inst);
    CHECK(o1.n_z == 1 * (inst.n + 1));

    // Projection of the one-leaf formulation is the atom itself: optimizing
    // any direction over both gives the same value.
    const AtomSystem atom = build_atom(t, inst, 0);
    LpProblem atom_lp;
    atom_lp.objective.assign(inst.n, 0.0);
    atom_lp.lower_bounds.assign(inst.n, -kInfinity);
    atom_lp.upper_bounds.assign(inst.n, kInfinity);
    for (int r = 0; r < atom.k(); ++r) atom_lp.add_row(atom.d[r], Relation::GE, atom.f[r]);

    SimplexSolver solver;
    SplitMix64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> d(inst.n);
        for (auto& v : d) v = rng.uniform(-1.0, 1.0);
        atom_lp.objective = d;
        const LpSolution a = solver.solve(atom_lp);
        const LpSolution b = optimize_over_polyhedron(o1, d, solver);
        REQUIRE(a.status == LpStatus::Optimal);
        REQUIRE(b.status == LpStatus::Optimal);
        CHECK(std::abs(a.objective_value - b.objective_value) <= 1e-7);
    }
}

TEST_CASE("O1 counts on a real tree") {
    const Fixture f = mkp_fixture(8, 6);
    int included = 0;
    for (int leaf : f.tree.leaf_ids())
        if (f.tree.nodes[leaf].status != NodeStatus::Infeasible) ++included;
    const Polyhedron o1 = build_O1_lin(f.tree, f.inst);
    CHECK(o1.n_z == included * (f.inst.n + 1));
    const int k = 1 + 2 * f.inst.n_binary + f.inst.finite_bound_count();
    CHECK(o1.num_ge_rows() == included * (k + 1));
    CHECK(o1.num_eq_rows() == f.inst.n + 1);
}

TEST_CASE("B_tight row accounting matches the documented split") {
    const Fixture f = mkp_fixture(8, 9);
    const int leaves = static_cast<int>(f.tree.leaf_ids().size());
    const Polyhedron bt = build_B_tight(f.tree, f.inst);
    const int bounds = 2 * f.inst.n_binary + f.inst.finite_bound_count();
    // x bounds, z >= 0, then the 2|L|-1 activation rows.
    CHECK(static_cast<int>(bt.rows.size()) == bounds + leaves + 2 * leaves - 1);
    CHECK(bt.num_eq_rows() == 1);
    CHECK(bt.n_z == leaves);
}

TEST_CASE("binary points satisfy B_tight exactly when z is the product form") {
    const Fixture f = mkp_fixture(5, 11);
    const Polyhedron bt = build_B_tight(f.tree, f.inst);
    const int leaves = static_cast<int>(f.tree.leaf_ids().size());
    REQUIRE(leaves <= 16);

    std::vector<int> bits(f.inst.n_binary);
    for (long xm = 0; xm < (1L << f.inst.n_binary); ++xm) {
        for (int j = 0; j < f.inst.n_binary; ++j) bits[j] = static_cast<int>((xm >> j) & 1);
        const std::vector<double> x(bits.begin(), bits.end());
        const std::vector<double> z_prod = product_form_z(f.tree, bits);
        for (long zm = 0; zm < (1L << leaves); ++zm) {
            std::vector<double> z(leaves, 0.0);
            for (int i = 0; i < leaves; ++i) z[i] = static_cast<double>((zm >> i) & 1);
            const bool in_bt = polyhedron_contains_point(bt, x, z, 1e-9);
            CHECK(in_bt == (z == z_prod));
        }
    }
}

TEST_CASE("H row behaviour") {
    const MbpInstance inst = generate_mkp(GeneratorConfig::for_size(6, 2));
    const BnbTree t = single_node_tree(-2.0, inst.n_binary);
    const PolyRow h = build_H(t, inst);
    // Single leaf: c'x >= l_r * z_r.
    REQUIRE(h.z_terms.size() == 1);
    CHECK(h.z_terms[0].val == 2.0);
    CHECK(h.rhs == 0.0);

    const Fixture f = mkp_fixture(8, 12);
    const Polyhedron o2 = build_O2_lin(f.tree, f.inst);
    const EnumerationResult e = enumerate_feasible(f.inst);
    for (const auto& x : e.feasible_points) {
        std::vector<int> bits(f.inst.n_binary);
        for (int j = 0; j < f.inst.n_binary; ++j) bits[j] = static_cast<int>(std::lround(x[j]));
        const std::vector<double> z = product_form_z(f.tree, bits);
        CHECK(polyhedron_contains_point(o2, x, z, 1e-9));
    }
    // All-zero z relaxes H to c'x >= 0, but violates the convexity row.
    const std::vector<double> zero_z(f.tree.leaf_ids().size(), 0.0);
    const std::vector<double> x0(f.inst.n, 0.0);
    CHECK_FALSE(polyhedron_contains_point(o2, x0, zero_z, 1e-9));
}

TEST_CASE("M rows: zero coefficient at the minimal leaf and |V| rows") {
    const Fixture f = mkp_fixture(8, 13);
    const TreeSummary s = summarize(f.tree);
    const std::vector<PolyRow> m = build_M(f.tree, f.inst);
    CHECK(static_cast<int>(m.size()) == f.tree.size());
    // A node at the minimum leaf bound contributes c'x >= mu regardless of z.
    for (int v = 0; v < f.tree.size(); ++v) {
        if (f.tree.nodes[v].dual_bound == s.mu) {
            CHECK(m[v].z_terms.empty());
            CHECK(m[v].rhs == s.mu);
        }
    }
}

TEST_CASE("O2 and O3 agree on binary points with product-form z") {
    const Fixture f = mkp_fixture(5, 14);
    const Polyhedron o2 = build_O2_lin(f.tree, f.inst);
    const Polyhedron o3 = build_O3_lin(f.tree, f.inst);
    std::vector<int> bits(f.inst.n_binary);
    for (long xm = 0; xm < (1L << f.inst.n_binary); ++xm) {
        for (int j = 0; j < f.inst.n_binary; ++j) bits[j] = static_cast<int>((xm >> j) & 1);
        const std::vector<double> x(bits.begin(), bits.end());
        const std::vector<double> z = product_form_z(f.tree, bits);
        CHECK(polyhedron_contains_point(o2, x, z, 1e-9) ==
              polyhedron_contains_point(o3, x, z, 1e-9));
    }
}

TEST_CASE("relaxation value hierarchy over random directions") {
    const Fixture f = mkp_fixture(8, 15);
    const Polyhedron o1 = build_O1_lin(f.tree, f.inst);
    const Polyhedron o2 = build_O2_lin(f.tree, f.inst);
    const Polyhedron o3 = build_O3_lin(f.tree, f.inst);
    SimplexSolver solver;
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> d(f.inst.n);
        for (auto& v : d) v = rng.uniform(-1.0, 1.0);
        const LpSolution a = optimize_over_polyhedron(o1, d, solver);
        const LpSolution b = optimize_over_polyhedron(o2, d, solver);
        const LpSolution c = optimize_over_polyhedron(o3, d, solver);
        REQUIRE(a.status == LpStatus::Optimal);
        REQUIRE(b.status == LpStatus::Optimal);
        REQUIRE(c.status == LpStatus::Optimal);
        CHECK(a.objective_value >= b.objective_value - 1e-7);
        CHECK(b.objective_value >= c.objective_value - 1e-7);
    }
}

TEST_CASE("every feasible point extends into each relaxed system") {
    const Fixture f = mkp_fixture(8, 16);
    const Polyhedron o1 = build_O1_lin(f.tree, f.inst);
    const Polyhedron o2 = build_O2_lin(f.tree, f.inst);
    const Polyhedron o3 = build_O3_lin(f.tree, f.inst);
    const EnumerationResult e = enumerate_feasible(f.inst);
    SimplexSolver solver;
    int tested = 0;
    for (const auto& x : e.feasible_points) {
        if (++tested > 12) break;  // membership LPs are not free
        CHECK(polyhedron_admits(o1, x, solver));
        CHECK(polyhedron_admits(o2, x, solver));
        CHECK(polyhedron_admits(o3, x, solver));
    }
    CHECK(tested > 0);
}
