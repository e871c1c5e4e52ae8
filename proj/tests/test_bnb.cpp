#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "treecut/bnb.hpp"
#include "treecut/model.hpp"
#include "treecut/oracle.hpp"
#include "treecut/rng.hpp"
#include "treecut/tree_ops.hpp"

using namespace treecut;

TEST_CASE("integral relaxation yields a single-node tree") {
    // min -x1 - x2 with no rows: the box relaxation is integral at (1,1).
    const MbpInstance inst = canonicalize("t", Sense::Min, {-1.0, -1.0}, {}, 2);
    const BnbResult r = solve_bnb(inst);
    CHECK(r.tree.size() == 1);
    CHECK(r.tree.nodes[0].status == NodeStatus::IntegerFeasible);
    REQUIRE(r.incumbent_value.has_value());
    CHECK(*r.incumbent_value == doctest::Approx(-2.0));
    CHECK(r.optimality_certified);
}

TEST_CASE("infeasible root is recorded") {
    LpRow row{{1.0, 1.0}, Relation::GE, 3.0};
    const MbpInstance inst = canonicalize("t", Sense::Min, {1.0, 1.0}, {row}, 2);
    const BnbResult r = solve_bnb(inst);
    CHECK(r.tree.size() == 1);
    CHECK(r.tree.nodes[0].status == NodeStatus::Infeasible);
    CHECK_FALSE(r.incumbent_value.has_value());
}

TEST_CASE("incumbent matches the enumeration oracle on seeded instances") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 9ull}) {
        const MbpInstance mkp = generate_mkp(GeneratorConfig::for_size(10, seed));
        const BnbResult r = solve_bnb(mkp);
        const EnumerationResult e = enumerate_feasible(mkp);
        REQUIRE(r.incumbent_value.has_value());
        REQUIRE(e.optimal_value.has_value());
        CHECK(std::abs(*r.incumbent_value - *e.optimal_value) <= 1e-7);
        CHECK(r.optimality_certified);

        GeneratorConfig cfg = GeneratorConfig::for_size(10, seed);
        const MbpInstance scp = generate_scp(cfg);
        const BnbResult rs = solve_bnb(scp);
        const EnumerationResult es = enumerate_feasible(scp);
        REQUIRE(rs.incumbent_value.has_value());
        CHECK(std::abs(*rs.incumbent_value - *es.optimal_value) <= 1e-7);
    }
}

TEST_CASE("dual bounds never decrease along a path") {
    const MbpInstance mkp = generate_mkp(GeneratorConfig::for_size(12, 4));
    const BnbResult r = solve_bnb(mkp);
    for (const BnbNode& v : r.tree.nodes) {
        if (v.is_root() || v.status == NodeStatus::Infeasible) continue;
        CHECK(v.dual_bound >= r.tree.nodes[v.parent].dual_bound - 1e-7);
    }
}

TEST_CASE("node limit caps the tree") {
    const MbpInstance mkp = generate_mkp(GeneratorConfig::for_size(14, 8));
    BnbLimits limits;
    limits.node_limit = 20;
    const BnbResult r = solve_bnb(mkp, limits);
    CHECK(r.limit_reached);
    CHECK(r.tree.size() <= 21);
    // Every node still carries a status and a usable bound.
    for (const BnbNode& v : r.tree.nodes)
        if (v.status != NodeStatus::Infeasible) CHECK(std::isfinite(v.dual_bound));
}

TEST_CASE("search is deterministic") {
    const MbpInstance mkp = generate_mkp(GeneratorConfig::for_size(12, 17));
    const BnbResult a = solve_bnb(mkp);
    const BnbResult b = solve_bnb(mkp);
    REQUIRE(a.tree.size() == b.tree.size());
    for (int i = 0; i < a.tree.size(); ++i) {
        CHECK(a.tree.nodes[i].parent == b.tree.nodes[i].parent);
        CHECK(a.tree.nodes[i].branch_var == b.tree.nodes[i].branch_var);
        CHECK(a.tree.nodes[i].status == b.tree.nodes[i].status);
        CHECK(a.tree.nodes[i].dual_bound == b.tree.nodes[i].dual_bound);
    }
}

TEST_CASE("branch variables never repeat on a path") {
    const MbpInstance scp = generate_scp(GeneratorConfig::for_size(12, 21));
    const BnbResult r = solve_bnb(scp);
    const TreeDiagnostics d = validate_tree(complete_tree(r.tree), 12);
    CHECK(d.clean());
}
