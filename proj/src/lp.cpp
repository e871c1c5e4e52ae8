#include "treecut/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace treecut {

void LpProblem::validate() const {
    const std::size_t n = objective.size();
    if (lower_bounds.size() != n || upper_bounds.size() != n)
        throw DimensionMismatch("lp: bound arrays do not match column count");
    for (const LpRow& r : rows)
        if (r.coeffs.size() != n)
            throw DimensionMismatch("lp: row length does not match column count");
    for (std::size_t j = 0; j < n; ++j)
        if (lower_bounds[j] > upper_bounds[j])
            throw DimensionMismatch("lp: lower bound above upper bound");
}

bool point_satisfies(const LpProblem& p, std::span<const double> x, double tol) {
    return worst_residual(p, x) >= -tol;
}

double worst_residual(const LpProblem& p, std::span<const double> x) {
    if (static_cast<int>(x.size()) != p.num_cols())
        throw DimensionMismatch("point_satisfies: point length mismatch");
    double worst = kInfinity;
    for (const LpRow& r : p.rows) {
        double act = 0.0;
        for (int j = 0; j < p.num_cols(); ++j) act += r.coeffs[j] * x[j];
        double res = 0.0;
        switch (r.rel) {
            case Relation::GE: res = act - r.rhs; break;
            case Relation::LE: res = r.rhs - act; break;
            case Relation::EQ: res = -std::abs(act - r.rhs); break;
        }
        worst = std::min(worst, res);
    }
    for (int j = 0; j < p.num_cols(); ++j) {
        if (p.lower_bounds[j] > -kInfinity) worst = std::min(worst, x[j] - p.lower_bounds[j]);
        if (p.upper_bounds[j] < kInfinity) worst = std::min(worst, p.upper_bounds[j] - x[j]);
    }
    return worst;
}

namespace {

enum class ColState : unsigned char { AtLower, AtUpper, Basic, FreeNonbasic, Fixed };

// Revised primal simplex with bounded variables and a dense explicit basis
// inverse. Column layout:
//   [0, ns)            structural columns
//   [ns, ns+nslack)    slack columns (-1 on GE rows, +1 on LE rows)
//   [art0, art0+m)     one artificial per row
// Rows are scaled by the sign sigma_i chosen so the initial artificial
// basis is feasible at value |residual|. The basis inverse is repaired by
// periodic refactorization, which bounds the drift any single pivot chain
// can accumulate; reduced costs are always priced against fresh duals.
struct Core {
    const LpProblem& p;
    const SimplexOptions& opt;

    int m = 0, ns = 0, nslack = 0, art0 = 0, ntot = 0;
    std::vector<double> acols;  // scaled columns, column-major: acols[j*m + i]
    std::vector<double> brhs;   // scaled rhs
    std::vector<double> sigma;
    std::vector<double> lb, ub, xval;
    std::vector<ColState> st;
    std::vector<int> basis;
    std::vector<double> binv;  // m x m row-major
    std::vector<double> cost;
    std::vector<double> y;  // duals of the scaled system
    std::vector<double> w;  // entering column in the current basis

    long iterations = 0;
    long degen_streak = 0;
    long since_refactor = 0;
    bool bland = false;
    bool in_phase1 = false;

    Core(const LpProblem& prob, const SimplexOptions& options) : p(prob), opt(options) {}

    double col(int j, int i) const { return acols[static_cast<std::size_t>(j) * m + i]; }

    void setup();
    bool phase1();
    void drive_out_artificials();
    LpStatus phase2();
    LpStatus iterate();
    void compute_duals();
    double reduced_cost(int j) const;
    void compute_entering_column(int e);
    void refactor();        // rebuild binv from the basis columns
    void recompute_basics();
    double phase1_infeasibility() const;
    void check_deadline() const;
    LpSolution extract() const;
    bool refine_basic_values();

    struct Pricing {
        int col = -1;
        int dir = 0;
    };
    Pricing price();

    struct Ratio {
        double t = kInfinity;
        int row = -1;  // -1: bound flip
        bool to_upper = false;
        bool tiny_blocked = false;
    };
    Ratio ratio_test(int enter, int dir) const;
    void apply_flip(int enter, int dir, double t);
    void apply_pivot(int enter, int dir, const Ratio& r);
};

void Core::setup() {
    m = p.num_rows();
    ns = p.num_cols();
    nslack = 0;
    for (const LpRow& r : p.rows)
        if (r.rel != Relation::EQ) ++nslack;
    art0 = ns + nslack;
    ntot = art0 + m;

    acols.assign(static_cast<std::size_t>(ntot) * m, 0.0);
    brhs.assign(m, 0.0);
    sigma.assign(m, 1.0);
    lb.assign(ntot, 0.0);
    ub.assign(ntot, 0.0);
    xval.assign(ntot, 0.0);
    st.assign(ntot, ColState::AtLower);
    basis.assign(m, -1);
    binv.assign(static_cast<std::size_t>(m) * m, 0.0);
    y.assign(m, 0.0);
    w.assign(m, 0.0);

    for (int j = 0; j < ns; ++j) {
        lb[j] = p.lower_bounds[j];
        ub[j] = p.upper_bounds[j];
    }
    std::vector<int> slack_of(m, -1);
    {
        int s = ns;
        for (int i = 0; i < m; ++i) {
            if (p.rows[i].rel == Relation::EQ) continue;
            slack_of[i] = s;
            lb[s] = 0.0;
            ub[s] = kInfinity;
            ++s;
        }
    }
    for (int i = 0; i < m; ++i) {
        lb[art0 + i] = 0.0;
        ub[art0 + i] = kInfinity;
    }

    for (int j = 0; j < art0; ++j) {
        if (lb[j] == ub[j]) {
            st[j] = ColState::Fixed;
            xval[j] = lb[j];
        } else if (lb[j] > -kInfinity) {
            st[j] = ColState::AtLower;
            xval[j] = lb[j];
        } else if (ub[j] < kInfinity) {
            st[j] = ColState::AtUpper;
            xval[j] = ub[j];
        } else {
            st[j] = ColState::FreeNonbasic;
            xval[j] = 0.0;
        }
    }

    // Row signs from the starting activities, then the scaled columns.
    for (int i = 0; i < m; ++i) {
        const LpRow& r = p.rows[i];
        double act = 0.0;
        for (int j = 0; j < ns; ++j) act += r.coeffs[j] * xval[j];
        if (slack_of[i] >= 0) {
            const double sc = r.rel == Relation::GE ? -1.0 : 1.0;
            act += sc * xval[slack_of[i]];
        }
        const double resid = r.rhs - act;
        sigma[i] = resid >= 0.0 ? 1.0 : -1.0;
    }
    for (int j = 0; j < ns; ++j)
        for (int i = 0; i < m; ++i)
            acols[static_cast<std::size_t>(j) * m + i] = sigma[i] * p.rows[i].coeffs[j];
    for (int i = 0; i < m; ++i) {
        if (slack_of[i] >= 0) {
            const double sc = p.rows[i].rel == Relation::GE ? -1.0 : 1.0;
            acols[static_cast<std::size_t>(slack_of[i]) * m + i] = sigma[i] * sc;
        }
        acols[static_cast<std::size_t>(art0 + i) * m + i] = 1.0;
        brhs[i] = sigma[i] * p.rows[i].rhs;
    }

    for (int i = 0; i < m; ++i) {
        basis[i] = art0 + i;
        st[art0 + i] = ColState::Basic;
        binv[static_cast<std::size_t>(i) * m + i] = 1.0;
    }
    recompute_basics();
}

void Core::recompute_basics() {
    // x_B = B^{-1} (b - N x_N)
    std::vector<double> rhs(brhs);
    for (int j = 0; j < ntot; ++j) {
        if (st[j] == ColState::Basic || xval[j] == 0.0) continue;
        const double* cj = &acols[static_cast<std::size_t>(j) * m];
        for (int i = 0; i < m; ++i)
            if (cj[i] != 0.0) rhs[i] -= cj[i] * xval[j];
    }
    for (int i = 0; i < m; ++i) {
        const double* row = &binv[static_cast<std::size_t>(i) * m];
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += row[k] * rhs[k];
        xval[basis[i]] = acc;
    }
}

void Core::refactor() {
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> bmat(static_cast<std::size_t>(m) * m);
    for (int c = 0; c < m; ++c) {
        const double* cj = &acols[static_cast<std::size_t>(basis[c]) * m];
        for (int i = 0; i < m; ++i) bmat[static_cast<std::size_t>(i) * m + c] = cj[i];
    }
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) inv[static_cast<std::size_t>(i) * m + i] = 1.0;

    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(bmat[static_cast<std::size_t>(r) * m + c]) >
                std::abs(bmat[static_cast<std::size_t>(piv) * m + c]))
                piv = r;
        const double pv = bmat[static_cast<std::size_t>(piv) * m + c];
        if (std::abs(pv) < 1e-12) throw NumericalFailure("lp: basis became singular");
        if (piv != c)
            for (int k = 0; k < m; ++k) {
                std::swap(bmat[static_cast<std::size_t>(piv) * m + k],
                          bmat[static_cast<std::size_t>(c) * m + k]);
                std::swap(inv[static_cast<std::size_t>(piv) * m + k],
                          inv[static_cast<std::size_t>(c) * m + k]);
            }
        const double invpv = 1.0 / bmat[static_cast<std::size_t>(c) * m + c];
        for (int k = 0; k < m; ++k) {
            bmat[static_cast<std::size_t>(c) * m + k] *= invpv;
            inv[static_cast<std::size_t>(c) * m + k] *= invpv;
        }
        for (int r = 0; r < m; ++r) {
            if (r == c) continue;
            const double f = bmat[static_cast<std::size_t>(r) * m + c];
            if (f == 0.0) continue;
            for (int k = 0; k < m; ++k) {
                bmat[static_cast<std::size_t>(r) * m + k] -=
                    f * bmat[static_cast<std::size_t>(c) * m + k];
                inv[static_cast<std::size_t>(r) * m + k] -=
                    f * inv[static_cast<std::size_t>(c) * m + k];
            }
        }
    }
    binv = std::move(inv);
    since_refactor = 0;
    recompute_basics();
}

void Core::compute_duals() {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < m; ++i) {
        const double cb = cost[basis[i]];
        if (cb == 0.0) continue;
        const double* row = &binv[static_cast<std::size_t>(i) * m];
        for (int k = 0; k < m; ++k) y[k] += cb * row[k];
    }
}

double Core::reduced_cost(int j) const {
    const double* cj = &acols[static_cast<std::size_t>(j) * m];
    double d = cost[j];
    for (int i = 0; i < m; ++i) d -= y[i] * cj[i];
    return d;
}

Core::Pricing Core::price() {
    compute_duals();
    Pricing best;
    double best_score = opt.duality_tol;
    for (int j = 0; j < ntot; ++j) {
        const ColState s = st[j];
        if (s == ColState::Basic || s == ColState::Fixed) continue;
        if (j >= art0) continue;  // artificials never re-enter
        const double d = reduced_cost(j);
        int dir = 0;
        double score = 0.0;
        if ((s == ColState::AtLower || s == ColState::FreeNonbasic) && d < -best_score) {
            dir = 1;
            score = -d;
        } else if ((s == ColState::AtUpper || s == ColState::FreeNonbasic) && d > best_score) {
            dir = -1;
            score = d;
        }
        if (dir == 0) continue;
        if (bland) return Pricing{j, dir};
        if (score > best_score) {
            best_score = score;
            best = Pricing{j, dir};
        }
    }
    return best;
}

void Core::compute_entering_column(int e) {
    const double* cj = &acols[static_cast<std::size_t>(e) * m];
    for (int i = 0; i < m; ++i) {
        const double* row = &binv[static_cast<std::size_t>(i) * m];
        double acc = 0.0;
        for (int k = 0; k < m; ++k) acc += row[k] * cj[k];
        w[i] = acc;
    }
}

Core::Ratio Core::ratio_test(int enter, int dir) const {
    Ratio r;
    double t_own = kInfinity;
    if (lb[enter] > -kInfinity && ub[enter] < kInfinity) t_own = ub[enter] - lb[enter];

    double t_limit = t_own;
    for (int i = 0; i < m; ++i) {
        const double yv = w[i];
        const double ay = std::abs(yv);
        if (ay <= opt.pivot_tol) {
            if (ay > 1e-13) r.tiny_blocked = true;
            continue;
        }
        const double delta = dir * yv;
        const int b = basis[i];
        double ti;
        if (delta > 0.0) {
            if (lb[b] <= -kInfinity) continue;
            ti = (xval[b] - lb[b]) / delta;
        } else {
            if (ub[b] >= kInfinity) continue;
            ti = (xval[b] - ub[b]) / delta;
        }
        t_limit = std::min(t_limit, std::max(ti, 0.0));
    }
    if (t_limit >= kInfinity) return r;

    // Arbitrate within rounding-level ties: largest pivot magnitude, or the
    // lowest basic index under Bland's rule.
    const double window = t_limit + 1e-12 * (1.0 + t_limit);
    double best_mag = 0.0;
    for (int i = 0; i < m; ++i) {
        const double yv = w[i];
        const double ay = std::abs(yv);
        if (ay <= opt.pivot_tol) continue;
        const double delta = dir * yv;
        const int b = basis[i];
        double ti;
        bool toup;
        if (delta > 0.0) {
            if (lb[b] <= -kInfinity) continue;
            ti = (xval[b] - lb[b]) / delta;
            toup = false;
        } else {
            if (ub[b] >= kInfinity) continue;
            ti = (xval[b] - ub[b]) / delta;
            toup = true;
        }
        if (ti < 0.0) ti = 0.0;
        if (ti > window) continue;
        // Largest pivot within the tie window, in stall mode too: an
        // index-based rule happily picks 1e-9 pivots, and a long run of
        // those is what actually destroys the basis.
        if (ay > best_mag) {
            best_mag = ay;
            r.row = i;
            r.t = ti;
            r.to_upper = toup;
        }
    }
    if (r.row < 0) r.t = t_own;  // only the entering column's flip blocks
    return r;
}

void Core::apply_flip(int enter, int dir, double t) {
    for (int i = 0; i < m; ++i)
        if (w[i] != 0.0) xval[basis[i]] -= dir * t * w[i];
    if (dir > 0) {
        xval[enter] = ub[enter];
        st[enter] = ColState::AtUpper;
    } else {
        xval[enter] = lb[enter];
        st[enter] = ColState::AtLower;
    }
}

void Core::apply_pivot(int enter, int dir, const Ratio& r) {
    const int row = r.row;
    const double enter_val = xval[enter] + dir * r.t;
    for (int i = 0; i < m; ++i) {
        if (i == row) continue;
        if (w[i] != 0.0) xval[basis[i]] -= dir * r.t * w[i];
    }
    const int leave = basis[row];
    xval[leave] = r.to_upper ? ub[leave] : lb[leave];
    st[leave] = lb[leave] == ub[leave] ? ColState::Fixed
                                       : (r.to_upper ? ColState::AtUpper : ColState::AtLower);

    // Eta update of the inverse.
    const double invpiv = 1.0 / w[row];
    double* prow = &binv[static_cast<std::size_t>(row) * m];
    for (int k = 0; k < m; ++k) prow[k] *= invpiv;
    for (int i = 0; i < m; ++i) {
        if (i == row) continue;
        const double f = w[i];
        if (f == 0.0) continue;
        double* irow = &binv[static_cast<std::size_t>(i) * m];
        for (int k = 0; k < m; ++k) irow[k] -= f * prow[k];
    }

    basis[row] = enter;
    st[enter] = ColState::Basic;
    xval[enter] = enter_val;
    ++since_refactor;
}

double Core::phase1_infeasibility() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= art0) total += std::max(0.0, xval[basis[i]]);
    return total;
}

void Core::check_deadline() const {
    if (!opt.deadline) return;
    const bool big = static_cast<long>(m) * ntot > 2'000'000;
    if (!big && (iterations & 0xFF) != 0) return;
    if (std::chrono::steady_clock::now() >= *opt.deadline)
        throw TimeLimitExceeded("lp: deadline exceeded");
}

LpStatus Core::iterate() {
    degen_streak = 0;
    bland = false;
    const long refactor_interval = std::max<long>(100, std::min<long>(1000, 40000 / (m + 1)));
    while (true) {
        if (++iterations > opt.max_iterations)
            throw NumericalFailure("lp: iteration limit exceeded");
        check_deadline();

        // Phase one only needs feasibility, not a proof of optimality over
        // a degenerate artificial basis.
        if (in_phase1 && phase1_infeasibility() <= 1e-10) return LpStatus::Optimal;

        if (since_refactor >= refactor_interval) refactor();

        const Pricing pr = price();
        if (pr.col < 0) return LpStatus::Optimal;

        compute_entering_column(pr.col);
        const Ratio r = ratio_test(pr.col, pr.dir);
        if (r.t >= kInfinity) {
            if (r.tiny_blocked)
                throw NumericalFailure("lp: unbounded ray blocked only by sub-tolerance pivots");
            if (in_phase1) throw NumericalFailure("lp: phase one reported unbounded");
            return LpStatus::Unbounded;
        }

        if (r.row < 0)
            apply_flip(pr.col, pr.dir, r.t);
        else
            apply_pivot(pr.col, pr.dir, r);

        if (r.t > 1e-7) {
            degen_streak = 0;
            bland = false;
        } else if (++degen_streak >= opt.bland_threshold) {
            bland = true;
        }
    }
}

bool Core::phase1() {
    in_phase1 = true;
    cost.assign(ntot, 0.0);
    for (int i = 0; i < m; ++i) cost[art0 + i] = 1.0;
    iterate();

    double scale = 1.0;
    for (const LpRow& r : p.rows) scale = std::max(scale, std::abs(r.rhs));
    return phase1_infeasibility() <= opt.feas_tol * scale;
}

void Core::drive_out_artificials() {
    for (int i = 0; i < m; ++i) {
        if (basis[i] < art0) continue;
        // Row i of B^{-1} A, restricted to candidate columns.
        const double* rho = &binv[static_cast<std::size_t>(i) * m];
        int best = -1;
        double best_mag = opt.pivot_tol;
        for (int j = 0; j < art0; ++j) {
            if (st[j] == ColState::Fixed || st[j] == ColState::Basic) continue;
            const double* cj = &acols[static_cast<std::size_t>(j) * m];
            double entry = 0.0;
            for (int k = 0; k < m; ++k) entry += rho[k] * cj[k];
            if (std::abs(entry) > best_mag) {
                best_mag = std::abs(entry);
                best = j;
            }
        }
        if (best < 0) continue;  // redundant row, artificial stays pinned
        compute_entering_column(best);
        Ratio r;
        r.t = 0.0;
        r.row = i;
        r.to_upper = false;
        apply_pivot(best, +1, r);
    }
    for (int j = art0; j < ntot; ++j) {
        ub[j] = 0.0;
        if (st[j] != ColState::Basic) {
            st[j] = ColState::Fixed;
            xval[j] = 0.0;
        }
    }
}

LpStatus Core::phase2() {
    in_phase1 = false;
    cost.assign(ntot, 0.0);
    for (int j = 0; j < ns; ++j) cost[j] = p.objective[j];
    return iterate();
}

LpSolution Core::extract() const {
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.iterations = iterations;
    sol.point.assign(xval.begin(), xval.begin() + ns);

    double obj = 0.0;
    for (int j = 0; j < ns; ++j) obj += p.objective[j] * sol.point[j];
    sol.objective_value = obj;

    // Duals of the original rows: unscale the duals of the scaled system.
    sol.row_duals.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const double cb = cost[basis[i]];
        if (cb == 0.0) continue;
        const double* row = &binv[static_cast<std::size_t>(i) * m];
        for (int k = 0; k < m; ++k) sol.row_duals[k] += cb * row[k];
    }
    for (int i = 0; i < m; ++i) sol.row_duals[i] *= sigma[i];

    sol.column_reduced_costs.assign(ns, 0.0);
    for (int j = 0; j < ns; ++j) {
        double d = p.objective[j];
        for (int i = 0; i < m; ++i) d -= sol.row_duals[i] * p.rows[i].coeffs[j];
        sol.column_reduced_costs[j] = d;
    }

    double dual_obj = 0.0;
    for (int i = 0; i < m; ++i) dual_obj += sol.row_duals[i] * p.rows[i].rhs;
    for (int j = 0; j < ns; ++j) {
        if (st[j] == ColState::Basic) continue;
        dual_obj += sol.column_reduced_costs[j] * xval[j];
    }
    sol.dual_objective = dual_obj;
    return sol;
}

bool Core::refine_basic_values() {
    // Exact LU solve for the basic values of the final basis, from the
    // original data.
    std::vector<double> rhs(brhs);
    for (int j = 0; j < ntot; ++j) {
        if (st[j] == ColState::Basic || xval[j] == 0.0) continue;
        const double* cj = &acols[static_cast<std::size_t>(j) * m];
        for (int i = 0; i < m; ++i)
            if (cj[i] != 0.0) rhs[i] -= cj[i] * xval[j];
    }
    std::vector<double> bmat(static_cast<std::size_t>(m) * m);
    for (int c = 0; c < m; ++c) {
        const double* cj = &acols[static_cast<std::size_t>(basis[c]) * m];
        for (int i = 0; i < m; ++i) bmat[static_cast<std::size_t>(i) * m + c] = cj[i];
    }
    for (int c = 0; c < m; ++c) {
        int piv = c;
        for (int r = c + 1; r < m; ++r)
            if (std::abs(bmat[static_cast<std::size_t>(r) * m + c]) >
                std::abs(bmat[static_cast<std::size_t>(piv) * m + c]))
                piv = r;
        if (std::abs(bmat[static_cast<std::size_t>(piv) * m + c]) < 1e-12) return false;
        if (piv != c) {
            for (int k = 0; k < m; ++k)
                std::swap(bmat[static_cast<std::size_t>(piv) * m + k],
                          bmat[static_cast<std::size_t>(c) * m + k]);
            std::swap(rhs[piv], rhs[c]);
        }
        const double d = bmat[static_cast<std::size_t>(c) * m + c];
        for (int r = c + 1; r < m; ++r) {
            const double f = bmat[static_cast<std::size_t>(r) * m + c] / d;
            if (f == 0.0) continue;
            for (int k = c; k < m; ++k)
                bmat[static_cast<std::size_t>(r) * m + k] -=
                    f * bmat[static_cast<std::size_t>(c) * m + k];
            rhs[r] -= f * rhs[c];
        }
    }
    for (int r = m - 1; r >= 0; --r) {
        double acc = rhs[r];
        for (int k = r + 1; k < m; ++k) acc -= bmat[static_cast<std::size_t>(r) * m + k] * rhs[k];
        rhs[r] = acc / bmat[static_cast<std::size_t>(r) * m + r];
    }
    for (int c = 0; c < m; ++c) xval[basis[c]] = rhs[c];
    return true;
}

}  // namespace

LpSolution SimplexSolver::solve(const LpProblem& problem) const {
    problem.validate();

    Core t(problem, opt_);
    t.setup();

    if (!t.phase1()) {
        LpSolution sol;
        sol.status = LpStatus::Infeasible;
        sol.iterations = t.iterations;
        return sol;
    }
    t.drive_out_artificials();

    const LpStatus status = t.phase2();
    if (status == LpStatus::Unbounded) {
        LpSolution sol;
        sol.status = LpStatus::Unbounded;
        sol.iterations = t.iterations;
        return sol;
    }

    // Final cleanup of pivot drift before reporting.
    t.refine_basic_values();
    LpSolution sol = t.extract();

    double scale = 1.0;
    for (const LpRow& r : problem.rows) scale = std::max(scale, std::abs(r.rhs));
    if (worst_residual(problem, sol.point) < -opt_.feas_tol * scale)
        throw NumericalFailure("lp: final point violates feasibility tolerance");
    return sol;
}

}  // namespace treecut
