#include "treecut/cglp.hpp"

#include <algorithm>
#include <cmath>

namespace treecut {

CglpSeparator::CglpSeparator(Polyhedron poly, CutSource source)
    : poly_(std::move(poly)), source_(source) {
    int nvars = 0;
    row_vars_.reserve(poly_.rows.size());
    for (const PolyRow& r : poly_.rows) {
        if (r.rel == Relation::EQ)
            row_vars_.emplace_back(nvars, nvars + 1), nvars += 2;
        else
            row_vars_.emplace_back(nvars, -1), nvars += 1;
    }

    lp_.objective.assign(nvars, 0.0);
    lp_.lower_bounds.assign(nvars, 0.0);
    lp_.upper_bounds.assign(nvars, kInfinity);

    // Cancellation of every auxiliary column: Wz'u = 0.
    std::vector<std::vector<double>> cols(poly_.n_z, std::vector<double>(nvars, 0.0));
    for (std::size_t i = 0; i < poly_.rows.size(); ++i) {
        const auto [plus, minus] = row_vars_[i];
        for (const SparseTerm& t : poly_.rows[i].z_terms) {
            cols[t.col][plus] += t.val;
            if (minus >= 0) cols[t.col][minus] -= t.val;
        }
    }
    for (int j = 0; j < poly_.n_z; ++j) lp_.add_row(std::move(cols[j]), Relation::EQ, 0.0);

    // Normalization: 1-norm of the nonnegative components.
    lp_.add_row(std::vector<double>(nvars, 1.0), Relation::EQ, 1.0);
}

std::optional<CglpSeparation> CglpSeparator::separate(std::span<const double> x_bar, double tol,
                                                      const SimplexSolver& solver) {
    if (static_cast<int>(x_bar.size()) != poly_.n_x)
        throw DimensionMismatch("cglp: separation point length");

    // Maximize h'u - (Wx'u)'x_bar, encoded as its negation.
    std::fill(lp_.objective.begin(), lp_.objective.end(), 0.0);
    for (std::size_t i = 0; i < poly_.rows.size(); ++i) {
        const PolyRow& r = poly_.rows[i];
        double slack = -r.rhs;
        for (const SparseTerm& t : r.x_terms) slack += t.val * x_bar[t.col];
        const auto [plus, minus] = row_vars_[i];
        lp_.objective[plus] = slack;
        if (minus >= 0) lp_.objective[minus] = -slack;
    }

    const LpSolution sol = solver.solve(lp_);
    if (sol.status != LpStatus::Optimal) return std::nullopt;

    std::vector<double> u(poly_.rows.size(), 0.0);
    for (std::size_t i = 0; i < poly_.rows.size(); ++i) {
        const auto [plus, minus] = row_vars_[i];
        u[i] = sol.point[plus] - (minus >= 0 ? sol.point[minus] : 0.0);
    }

    std::vector<double> pi(poly_.n_x, 0.0);
    double pi0 = 0.0;
    for (std::size_t i = 0; i < poly_.rows.size(); ++i) {
        if (u[i] == 0.0) continue;
        for (const SparseTerm& t : poly_.rows[i].x_terms) pi[t.col] += u[i] * t.val;
        pi0 += u[i] * poly_.rows[i].rhs;
    }

    double norm = std::abs(pi0);
    for (double v : pi) norm = std::max(norm, std::abs(v));
    if (norm < 1e-12) return std::nullopt;  // degenerate combination

    const double inv = 1.0 / norm;
    for (double& v : pi) v *= inv;
    pi0 *= inv;
    for (double& v : u) v *= inv;

    double violation = pi0;
    for (int j = 0; j < poly_.n_x; ++j) violation -= pi[j] * x_bar[j];
    if (violation <= tol) return std::nullopt;

    CglpSeparation out;
    out.cut.pi = std::move(pi);
    out.cut.pi0 = pi0;
    out.cut.source = source_;
    out.cut.violation_at_generation = violation;
    out.multipliers = std::move(u);
    out.cglp_objective = -sol.objective_value;
    return out;
}

std::optional<Cut> separate_cglp(const Polyhedron& poly, std::span<const double> x_bar,
                                 double tol, CutSource source) {
    CglpSeparator sep(poly, source);
    auto r = sep.separate(x_bar, tol);
    if (!r) return std::nullopt;
    return std::move(r->cut);
}

LpProblem build_cglp(const Polyhedron& poly, std::span<const double> x_bar) {
    CglpSeparator sep(poly, CutSource::CglpO1);
    LpProblem p = sep.lp();
    // Fill the objective the same way separate() does.
    std::size_t idx = 0;
    for (const PolyRow& r : poly.rows) {
        double slack = -r.rhs;
        for (const SparseTerm& t : r.x_terms) slack += t.val * x_bar[t.col];
        p.objective[idx++] = slack;
        if (r.rel == Relation::EQ) p.objective[idx++] = -slack;
    }
    return p;
}

}  // namespace treecut
