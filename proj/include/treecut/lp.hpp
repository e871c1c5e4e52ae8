#pragma once

#include <chrono>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treecut/errors.hpp"

namespace treecut {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Relation { GE, LE, EQ };

struct LpRow {
    std::vector<double> coeffs;
    Relation rel = Relation::GE;
    double rhs = 0.0;
};

/// Dense linear program, always in minimization form. Bounds may be
/// infinite; every row coefficient vector must have length num_cols().
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> lower_bounds;
    std::vector<double> upper_bounds;

    int num_cols() const { return static_cast<int>(objective.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    void add_row(std::vector<double> coeffs, Relation rel, double rhs) {
        rows.push_back(LpRow{std::move(coeffs), rel, rhs});
    }

    /// Throws DimensionMismatch if row lengths or bound arrays are inconsistent.
    void validate() const;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> point;
    double objective_value = 0.0;
    /// One multiplier per row; >= 0 on active GE rows, <= 0 on active LE
    /// rows, free on equalities.
    std::vector<double> row_duals;
    std::vector<double> column_reduced_costs;
    long iterations = 0;

    /// b'y plus the bound contributions of nonbasic columns.
    double dual_objective = 0.0;
};

struct SimplexOptions {
    double feas_tol = 1e-7;
    double pivot_tol = 1e-9;
    double duality_tol = 1e-7;
    /// Consecutive degenerate pivots before switching to Bland's rule.
    int bland_threshold = 50;
    long max_iterations = 2'000'000;
    /// Optional wall-clock deadline; checked periodically, throws
    /// TimeLimitExceeded when passed.
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

/// Two-phase primal simplex on a dense tableau with bounded variables.
/// Dantzig pricing, falling back to Bland's rule after a configurable run
/// of degenerate pivots. Equality rows are handled natively through the
/// phase-one artificials, so their dual multipliers stay free. A solver
/// holds no state between calls and the same problem always resolves to a
/// bitwise identical status and objective.
class SimplexSolver {
public:
    explicit SimplexSolver(SimplexOptions options = {}) : opt_(options) {}

    LpSolution solve(const LpProblem& problem) const;

    const SimplexOptions& options() const { return opt_; }

private:
    SimplexOptions opt_;
};

/// True iff every row relation and every bound holds within tol.
bool point_satisfies(const LpProblem& problem, std::span<const double> point, double tol);

/// Worst signed residual over rows and bounds (negative means violated).
double worst_residual(const LpProblem& problem, std::span<const double> point);

}  // namespace treecut
