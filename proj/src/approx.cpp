#include "treecut/approx.hpp"

#include <algorithm>
#include <cmath>

namespace treecut {

namespace {

void require_completed(const BnbTree& tree) {
    if (!tree.completed) throw MalformedTree("approx: tree must be completed first");
}

// x bound rows of the relaxed variable box: one GE pair per binary and the
// finite continuous bounds. Used by the atom rows and by B_tight.
void append_x_bound_rows(const MbpInstance& inst, std::vector<PolyRow>& rows) {
    for (int j = 0; j < inst.n_binary; ++j) {
        rows.push_back(PolyRow{{{j, 1.0}}, {}, Relation::GE, 0.0});
        rows.push_back(PolyRow{{{j, -1.0}}, {}, Relation::GE, -1.0});
    }
    for (int j = inst.n_binary; j < inst.n; ++j) {
        const double lo = inst.cont_lower[j - inst.n_binary];
        const double hi = inst.cont_upper[j - inst.n_binary];
        if (lo > -kInfinity) rows.push_back(PolyRow{{{j, 1.0}}, {}, Relation::GE, lo});
        if (hi < kInfinity) rows.push_back(PolyRow{{{j, -1.0}}, {}, Relation::GE, -hi});
    }
}

}  // namespace

bool AtomSystem::contains(std::span<const double> x, double tol) const {
    for (int r = 0; r < k(); ++r) {
        double act = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) act += d[r][j] * x[j];
        if (act < f[r] - tol) return false;
    }
    return true;
}

AtomSystem build_atom(const BnbTree& tree, const MbpInstance& instance, int leaf) {
    require_completed(tree);
    const BnbNode& v = tree.nodes[leaf];
    if (!v.children.empty()) throw ExcludedLeaf("build_atom: node is not a leaf");
    if (v.status == NodeStatus::Infeasible)
        throw ExcludedLeaf("build_atom: leaf excluded from the disjunction");

    AtomSystem atom;
    atom.leaf = leaf;
    const int n = instance.n;

    std::vector<int> fixing(instance.n_binary, -1);
    for (auto [var, val] : tree.path_fixings(leaf)) fixing[var] = val;

    // Local bound row first, then a bound pair per binary with fixed
    // variables encoded by tightening the pair, then the continuous bounds.
    // The layout keeps k identical across the leaves of one tree.
    atom.d.push_back(instance.objective);
    atom.f.push_back(v.dual_bound);

    for (int j = 0; j < instance.n_binary; ++j) {
        std::vector<double> lo(n, 0.0), hi(n, 0.0);
        lo[j] = 1.0;
        hi[j] = -1.0;
        atom.d.push_back(std::move(lo));
        atom.f.push_back(fixing[j] == 1 ? 1.0 : 0.0);
        atom.d.push_back(std::move(hi));
        atom.f.push_back(fixing[j] == 0 ? 0.0 : -1.0);
    }
    for (int j = instance.n_binary; j < n; ++j) {
        const double lo = instance.cont_lower[j - instance.n_binary];
        const double hi = instance.cont_upper[j - instance.n_binary];
        if (lo > -kInfinity) {
            std::vector<double> row(n, 0.0);
            row[j] = 1.0;
            atom.d.push_back(std::move(row));
            atom.f.push_back(lo);
        }
        if (hi < kInfinity) {
            std::vector<double> row(n, 0.0);
            row[j] = -1.0;
            atom.d.push_back(std::move(row));
            atom.f.push_back(-hi);
        }
    }
    return atom;
}

Polyhedron build_O1_lin(const BnbTree& tree, const MbpInstance& instance) {
    require_completed(tree);
    const int n = instance.n;

    std::vector<int> included;
    for (int leaf : tree.leaf_ids())
        if (tree.nodes[leaf].status != NodeStatus::Infeasible) included.push_back(leaf);
    if (included.empty()) throw EmptyDisjunction("build_O1_lin: every leaf is excluded");

    Polyhedron poly;
    poly.n_x = n;
    poly.n_z = static_cast<int>(included.size()) * (n + 1);

    // Column layout: per included leaf, n copy columns then the scalar.
    const auto copy_col = [&](int li, int j) { return li * (n + 1) + j; };
    const auto scalar_col = [&](int li) { return li * (n + 1) + n; };
    for (std::size_t li = 0; li < included.size(); ++li) {
        for (int j = 0; j < n; ++j)
            poly.z_labels.push_back(ZLabel{ZLabel::LeafCopy, included[li], j});
        poly.z_labels.push_back(ZLabel{ZLabel::LeafScalar, included[li], -1});
    }

    for (std::size_t li = 0; li < included.size(); ++li) {
        const AtomSystem atom = build_atom(tree, instance, included[li]);
        for (int r = 0; r < atom.k(); ++r) {
            PolyRow row;
            for (int j = 0; j < n; ++j)
                if (atom.d[r][j] != 0.0)
                    row.z_terms.push_back({copy_col(static_cast<int>(li), j), atom.d[r][j]});
            if (atom.f[r] != 0.0)
                row.z_terms.push_back({scalar_col(static_cast<int>(li)), -atom.f[r]});
            row.rel = Relation::GE;
            row.rhs = 0.0;
            poly.rows.push_back(std::move(row));
        }
    }
    for (int j = 0; j < n; ++j) {
        PolyRow link;
        link.x_terms.push_back({j, 1.0});
        for (std::size_t li = 0; li < included.size(); ++li)
            link.z_terms.push_back({copy_col(static_cast<int>(li), j), -1.0});
        link.rel = Relation::EQ;
        link.rhs = 0.0;
        poly.rows.push_back(std::move(link));
    }
    PolyRow convexity;
    for (std::size_t li = 0; li < included.size(); ++li)
        convexity.z_terms.push_back({scalar_col(static_cast<int>(li)), 1.0});
    convexity.rel = Relation::EQ;
    convexity.rhs = 1.0;
    poly.rows.push_back(std::move(convexity));

    for (std::size_t li = 0; li < included.size(); ++li)
        poly.rows.push_back(
            PolyRow{{}, {{scalar_col(static_cast<int>(li)), 1.0}}, Relation::GE, 0.0});
    return poly;
}

Polyhedron build_B_tight(const BnbTree& tree, const MbpInstance& instance) {
    require_completed(tree);
    const TreeSummary summary = summarize(tree);
    const std::vector<int> leaves = tree.leaf_ids();

    Polyhedron poly;
    poly.n_x = instance.n;
    poly.n_z = static_cast<int>(leaves.size());

    std::vector<int> zcol(tree.size(), -1);
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        zcol[leaves[i]] = static_cast<int>(i);
        poly.z_labels.push_back(ZLabel{ZLabel::LeafIndicator, leaves[i], -1});
    }

    append_x_bound_rows(instance, poly.rows);
    for (std::size_t i = 0; i < leaves.size(); ++i)
        poly.rows.push_back(PolyRow{{}, {{static_cast<int>(i), 1.0}}, Relation::GE, 0.0});

    // Root indicator: the leaf indicators sum to one.
    PolyRow root_row;
    for (std::size_t i = 0; i < leaves.size(); ++i)
        root_row.z_terms.push_back({static_cast<int>(i), 1.0});
    root_row.rel = Relation::EQ;
    root_row.rhs = 1.0;
    poly.rows.push_back(std::move(root_row));

    // Per-node activation: the indicator mass under v cannot exceed the
    // value consistent with v's own fixing.
    for (const BnbNode& v : tree.nodes) {
        if (v.is_root()) continue;
        PolyRow row;
        for (int leaf : summary.leaf_descendants[v.id]) row.z_terms.push_back({zcol[leaf], -1.0});
        if (v.branch_value == 0) {
            row.x_terms.push_back({v.branch_var, -1.0});
            row.rhs = -1.0;
        } else {
            row.x_terms.push_back({v.branch_var, 1.0});
            row.rhs = 0.0;
        }
        row.rel = Relation::GE;
        poly.rows.push_back(std::move(row));
    }
    return poly;
}

PolyRow build_H(const BnbTree& tree, const MbpInstance& instance) {
    require_completed(tree);
    PolyRow row;
    for (int j = 0; j < instance.n; ++j)
        if (instance.objective[j] != 0.0) row.x_terms.push_back({j, instance.objective[j]});
    const std::vector<int> leaves = tree.leaf_ids();
    for (std::size_t i = 0; i < leaves.size(); ++i)
        row.z_terms.push_back({static_cast<int>(i), -tree.nodes[leaves[i]].dual_bound});
    row.rel = Relation::GE;
    row.rhs = 0.0;
    return row;
}

std::vector<PolyRow> build_M(const BnbTree& tree, const MbpInstance& instance) {
    require_completed(tree);
    const TreeSummary summary = summarize(tree);
    const std::vector<int> leaves = tree.leaf_ids();
    std::vector<int> zcol(tree.size(), -1);
    for (std::size_t i = 0; i < leaves.size(); ++i) zcol[leaves[i]] = static_cast<int>(i);

    std::vector<PolyRow> rows;
    rows.reserve(tree.size());
    for (const BnbNode& v : tree.nodes) {
        PolyRow row;
        for (int j = 0; j < instance.n; ++j)
            if (instance.objective[j] != 0.0) row.x_terms.push_back({j, instance.objective[j]});
        const double coef = summary.mu - v.dual_bound;
        if (coef != 0.0)
            for (int leaf : summary.leaf_descendants[v.id])
                row.z_terms.push_back({zcol[leaf], coef});
        row.rel = Relation::GE;
        row.rhs = summary.mu;
        rows.push_back(std::move(row));
    }
    return rows;
}

Polyhedron build_O2_lin(const BnbTree& tree, const MbpInstance& instance) {
    Polyhedron poly = build_B_tight(tree, instance);
    poly.rows.push_back(build_H(tree, instance));
    return poly;
}

Polyhedron build_O3_lin(const BnbTree& tree, const MbpInstance& instance) {
    Polyhedron poly = build_B_tight(tree, instance);
    for (PolyRow& row : build_M(tree, instance)) poly.rows.push_back(std::move(row));
    return poly;
}

namespace {

LpProblem polyhedron_lp(const Polyhedron& poly) {
    LpProblem p;
    const int total = poly.n_x + poly.n_z;
    p.objective.assign(total, 0.0);
    p.lower_bounds.assign(total, -kInfinity);
    p.upper_bounds.assign(total, kInfinity);
    for (const PolyRow& r : poly.rows) {
        LpRow row;
        row.coeffs.assign(total, 0.0);
        for (const SparseTerm& t : r.x_terms) row.coeffs[t.col] += t.val;
        for (const SparseTerm& t : r.z_terms) row.coeffs[poly.n_x + t.col] += t.val;
        row.rel = r.rel;
        row.rhs = r.rhs;
        p.rows.push_back(std::move(row));
    }
    return p;
}

}  // namespace

LpSolution optimize_over_polyhedron(const Polyhedron& poly, std::span<const double> objective_x,
                                    const SimplexSolver& solver) {
    if (static_cast<int>(objective_x.size()) != poly.n_x)
        throw DimensionMismatch("optimize_over_polyhedron: objective length");
    LpProblem p = polyhedron_lp(poly);
    for (int j = 0; j < poly.n_x; ++j) p.objective[j] = objective_x[j];
    return solver.solve(p);
}

bool polyhedron_admits(const Polyhedron& poly, std::span<const double> x_bar,
                       const SimplexSolver& solver) {
    if (static_cast<int>(x_bar.size()) != poly.n_x)
        throw DimensionMismatch("polyhedron_admits: point length");
    LpProblem p = polyhedron_lp(poly);
    for (int j = 0; j < poly.n_x; ++j) {
        p.lower_bounds[j] = x_bar[j];
        p.upper_bounds[j] = x_bar[j];
    }
    return solver.solve(p).status == LpStatus::Optimal;
}

bool polyhedron_contains_point(const Polyhedron& poly, std::span<const double> x,
                               std::span<const double> z, double tol) {
    for (const PolyRow& r : poly.rows) {
        double act = 0.0;
        for (const SparseTerm& t : r.x_terms) act += t.val * x[t.col];
        for (const SparseTerm& t : r.z_terms) act += t.val * z[t.col];
        if (r.rel == Relation::GE ? act < r.rhs - tol : std::abs(act - r.rhs) > tol) return false;
    }
    return true;
}

}  // namespace treecut
