#pragma once

#include <optional>
#include <span>
#include <vector>

#include "treecut/approx.hpp"
#include "treecut/cut.hpp"
#include "treecut/lp.hpp"

namespace treecut {

struct CglpSeparation {
    Cut cut;
    /// Certifying multipliers, one per source-polyhedron row (equality
    /// rows recombined), scaled along with the cut.
    std::vector<double> multipliers;
    /// Objective of the multiplier program, before cut rescaling.
    double cglp_objective = 0.0;
};

/// Cut-generating LP over a generic extended system. The multiplier
/// program is assembled once per polyhedron; only its objective depends on
/// the point being separated, so repeated separations reuse the
/// constraint matrix.
///
/// Multiplier layout: GE rows one nonnegative component, equality rows a
/// split nonnegative pair. Feasibility asks the combination to cancel all
/// auxiliary columns, and the normalization pins the 1-norm of the
/// components to one. The most violated combination then reads off as
/// pi = Wx'u, pi0 = h'u.
class CglpSeparator {
public:
    CglpSeparator(Polyhedron poly, CutSource source);

    /// Most violated valid inequality at x_bar, or nothing when the best
    /// violation is at most tol. Returned cuts are rescaled so that
    /// max(|pi|_inf, |pi0|) = 1; the acceptance threshold applies to the
    /// rescaled violation.
    std::optional<CglpSeparation> separate(std::span<const double> x_bar, double tol,
                                           const SimplexSolver& solver = SimplexSolver{});

    const LpProblem& lp() const { return lp_; }
    const Polyhedron& polyhedron() const { return poly_; }
    int num_multiplier_vars() const { return lp_.num_cols(); }
    int num_constraints() const { return lp_.num_rows(); }

private:
    Polyhedron poly_;
    CutSource source_;
    LpProblem lp_;
    /// var index of each row's multiplier; equality rows use (plus, minus).
    std::vector<std::pair<int, int>> row_vars_;
};

/// One-shot variant of the separator above.
std::optional<Cut> separate_cglp(const Polyhedron& poly, std::span<const double> x_bar,
                                 double tol, CutSource source);

/// The multiplier program for a given separation point (exposed mostly for
/// size accounting and tests).
LpProblem build_cglp(const Polyhedron& poly, std::span<const double> x_bar);

}  // namespace treecut
