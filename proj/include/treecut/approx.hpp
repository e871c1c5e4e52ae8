#pragma once

#include <span>
#include <vector>

#include "treecut/bnb.hpp"
#include "treecut/lp.hpp"
#include "treecut/model.hpp"
#include "treecut/tree_ops.hpp"

namespace treecut {

struct SparseTerm {
    int col = 0;
    double val = 0.0;
};

/// Generic extended-space constraint system W_x x + W_z z {>=,=} h.
/// Rows are stored sparsely; LE is normalized away at construction.
struct PolyRow {
    std::vector<SparseTerm> x_terms;
    std::vector<SparseTerm> z_terms;
    Relation rel = Relation::GE;  // GE or EQ only
    double rhs = 0.0;
};

/// Provenance of an auxiliary column.
struct ZLabel {
    enum Kind { LeafIndicator, LeafCopy, LeafScalar } kind = LeafIndicator;
    int leaf = -1;
    int x_index = -1;  // LeafCopy only
};

struct Polyhedron {
    int n_x = 0;
    int n_z = 0;
    std::vector<PolyRow> rows;
    std::vector<ZLabel> z_labels;

    int num_ge_rows() const {
        int c = 0;
        for (const PolyRow& r : rows)
            if (r.rel == Relation::GE) ++c;
        return c;
    }
    int num_eq_rows() const {
        int c = 0;
        for (const PolyRow& r : rows)
            if (r.rel == Relation::EQ) ++c;
        return c;
    }
    /// Row tally with each equality counted as its two-inequality split.
    int inequality_tally() const { return num_ge_rows() + 2 * num_eq_rows(); }
};

/// Leaf subsystem D_v x >= f_v: the local bound row c'x >= l_v, one bound
/// pair per binary (tightened to the path fixings), and the finite
/// continuous bound rows. Every leaf of a tree yields the same row count
/// k = 1 + 2|I_B| + o.
struct AtomSystem {
    int leaf = -1;
    std::vector<std::vector<double>> d;  // k x n
    std::vector<double> f;               // k

    int k() const { return static_cast<int>(f.size()); }
    bool contains(std::span<const double> x, double tol) const;
};

AtomSystem build_atom(const BnbTree& tree, const MbpInstance& instance, int leaf);

/// Disjunctive extended formulation: per included leaf v a copy block
/// z^v in R^n plus a scalar z0^v, atom rows D_v z^v - f_v z0^v >= 0,
/// linking equalities sum_v z^v = x, sum_v z0^v = 1 and z0 >= 0.
/// Infeasible leaves are excluded from the disjunction.
Polyhedron build_O1_lin(const BnbTree& tree, const MbpInstance& instance);

/// Tightened leaf-indicator system over (x, z) with one z column per leaf:
/// sum_L z = 1, per-node branching rows with internal indicators replaced
/// by their leaf sums, z >= 0 and the x bounds.
Polyhedron build_B_tight(const BnbTree& tree, const MbpInstance& instance);

/// The single bound-activation row c'x - sum_L l_v z_v >= 0.
PolyRow build_H(const BnbTree& tree, const MbpInstance& instance);

/// Mixing rows, one per node v: c'x + (mu - l_v) sum_{u in L_v} z_u >= mu.
std::vector<PolyRow> build_M(const BnbTree& tree, const MbpInstance& instance);

Polyhedron build_O2_lin(const BnbTree& tree, const MbpInstance& instance);
Polyhedron build_O3_lin(const BnbTree& tree, const MbpInstance& instance);

/// min objective_x'x over the relaxed extended system (z unconstrained
/// beyond the stored rows).
LpSolution optimize_over_polyhedron(const Polyhedron& poly, std::span<const double> objective_x,
                                    const SimplexSolver& solver = SimplexSolver{});

/// Feasibility of x_bar in the projection: is there a z completing it?
bool polyhedron_admits(const Polyhedron& poly, std::span<const double> x_bar,
                       const SimplexSolver& solver = SimplexSolver{});

/// Evaluates the rows at a fully specified (x, z) point.
bool polyhedron_contains_point(const Polyhedron& poly, std::span<const double> x,
                               std::span<const double> z, double tol);

}  // namespace treecut
