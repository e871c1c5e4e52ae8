#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "treecut/lp.hpp"

namespace treecut {

enum class Sense { Min, Max };

/// Mixed-binary instance in canonical form: minimization, every row stored
/// as GE. Binary variables occupy indices [0, n_binary); the remaining
/// columns are continuous with explicit (possibly infinite) bounds.
/// Reported objective values are translated back through original_sense.
struct MbpInstance {
    std::string name;
    Sense original_sense = Sense::Min;
    std::vector<double> objective;  // canonical (min) coefficients
    std::vector<LpRow> rows;        // all GE
    int n = 0;
    int n_binary = 0;
    std::vector<double> cont_lower;  // size n - n_binary
    std::vector<double> cont_upper;
    std::uint64_t seed = 0;

    int n_continuous() const { return n - n_binary; }

    /// Count of finite continuous bound rows.
    int finite_bound_count() const {
        int o = 0;
        for (double b : cont_lower)
            if (b > -kInfinity) ++o;
        for (double b : cont_upper)
            if (b < kInfinity) ++o;
        return o;
    }

    /// Continuous relaxation: binaries boxed to [0,1].
    LpProblem relaxation() const;

    double to_original_sense(double canonical_value) const {
        return original_sense == Sense::Max ? -canonical_value : canonical_value;
    }
};

struct GeneratorConfig {
    int n = 10;
    int m = 5;  // both families default to n/2 rows
    double density = 0.2;  // SCP only
    std::uint64_t seed = 0;
    /// Keeps the set-covering objective a maximization. Off by default
    /// because max makes the instance trivial (all-ones is optimal).
    bool scp_literal_max_objective = false;

    static GeneratorConfig for_size(int n, std::uint64_t seed) {
        GeneratorConfig c;
        c.n = n;
        c.m = n / 2;
        c.seed = seed;
        return c;
    }
};

/// Normalizes arbitrary sense/relations into the canonical min/GE form.
/// Max objectives are negated, LE rows are negated, EQ rows are split into
/// a GE pair.
MbpInstance canonicalize(std::string name, Sense sense, std::vector<double> objective,
                         std::vector<LpRow> rows, int n_binary,
                         std::vector<double> cont_lower = {},
                         std::vector<double> cont_upper = {}, std::uint64_t seed = 0);

/// Multi-knapsack: maximize c'x st Ax <= b over binaries, c ~ U(1,2),
/// A ~ U(0,1), b_i = 0.9 * row sum of A.
MbpInstance generate_mkp(const GeneratorConfig& config);

/// Set covering: minimize c'x st Ax >= 1 over binaries, A Bernoulli(q)
/// with all-zero rows redrawn, c ~ U(1,2).
MbpInstance generate_scp(const GeneratorConfig& config);

/// Adds Normal(0, 0.1*|c_i|) noise to each objective coefficient, applied
/// in the instance's original sense. Constraints are untouched.
MbpInstance perturb_objective(const MbpInstance& instance, std::uint64_t seed);

}  // namespace treecut
