#pragma once

#include <optional>
#include <string>
#include <vector>

#include "treecut/bnb.hpp"
#include "treecut/cut.hpp"
#include "treecut/model.hpp"

namespace treecut {

enum class SeparatorKind { Obj, Sti, CglpO1, CglpO2, CglpO3 };

const char* to_string(SeparatorKind k);
std::optional<SeparatorKind> separator_from_string(const std::string& s);

struct CutLoopLimits {
    double time_limit_s = 600.0;
    int max_iters = 10'000;
    double violation_tol = 1e-6;
};

struct GapValue {
    double value = 0.0;
    /// Set when |l_opt| < 1e-12; the value is then the absolute difference.
    bool zero_optimum = false;
};

/// Relative distance |l_opt - l_dual| / |l_opt| of two values given in the
/// instance's original sense.
GapValue compute_gap(double l_dual, double l_opt);

struct CutLoopResult {
    double dual_bound = 0.0;      // original sense
    double optimal_value = 0.0;   // original sense
    GapValue gap;
    int cuts_added = 0;
    int iterations = 0;
    double wall_time_s = 0.0;
    bool timed_out = false;
    bool numerical_failure = false;
    std::string failure_message;
    std::vector<Cut> cuts;
    /// Canonical LP value after each solve, for monotonicity checks.
    std::vector<double> bound_trace;
};

/// Single valid inequality c'x >= (min leaf bound of the completed tree),
/// using the tree's original objective. Equals the original optimum
/// whenever the tree certified optimality.
Cut objective_cut(const BnbTree& tree, const MbpInstance& instance);

/// The bound carried by the objective cut.
double tree_dual_bound(const BnbTree& tree);

/// Pure cutting-plane loop on the perturbed instance: solve the relaxation
/// with the accumulated cuts, separate the most violated inequality of the
/// chosen family at the optimum, repeat until no violation, iteration cap
/// or time limit. All separators derive validity from the tree built on
/// the unperturbed objective; the perturbed objective only drives the
/// outer LP. `optimal_value_canonical` is the perturbed optimum (a fresh
/// search outside the timed window supplies it).
CutLoopResult run_cutting_plane(const MbpInstance& perturbed, const BnbTree& tree,
                                const MbpInstance& original, SeparatorKind kind,
                                double optimal_value_canonical,
                                const CutLoopLimits& limits = {});

}  // namespace treecut
