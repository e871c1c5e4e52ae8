#include "treecut/model.hpp"

#include <cmath>
#include <utility>

#include "treecut/rng.hpp"

namespace treecut {

LpProblem MbpInstance::relaxation() const {
    LpProblem p;
    p.objective = objective;
    p.rows = rows;
    p.lower_bounds.assign(n, 0.0);
    p.upper_bounds.assign(n, 1.0);
    for (int j = n_binary; j < n; ++j) {
        p.lower_bounds[j] = cont_lower[j - n_binary];
        p.upper_bounds[j] = cont_upper[j - n_binary];
    }
    return p;
}

MbpInstance canonicalize(std::string name, Sense sense, std::vector<double> objective,
                         std::vector<LpRow> rows, int n_binary, std::vector<double> cont_lower,
                         std::vector<double> cont_upper, std::uint64_t seed) {
    const int n = static_cast<int>(objective.size());
    if (n_binary < 0 || n_binary > n) throw DimensionMismatch("canonicalize: bad binary count");
    if (static_cast<int>(cont_lower.size()) != n - n_binary ||
        static_cast<int>(cont_upper.size()) != n - n_binary)
        throw DimensionMismatch("canonicalize: continuous bound arrays mismatch");
    for (const LpRow& r : rows)
        if (static_cast<int>(r.coeffs.size()) != n)
            throw DimensionMismatch("canonicalize: row length mismatch");

    MbpInstance inst;
    inst.name = std::move(name);
    inst.original_sense = sense;
    inst.n = n;
    inst.n_binary = n_binary;
    inst.cont_lower = std::move(cont_lower);
    inst.cont_upper = std::move(cont_upper);
    inst.seed = seed;

    inst.objective = std::move(objective);
    if (sense == Sense::Max)
        for (double& c : inst.objective) c = -c;

    for (LpRow& r : rows) {
        switch (r.rel) {
            case Relation::GE:
                inst.rows.push_back(std::move(r));
                break;
            case Relation::LE: {
                for (double& c : r.coeffs) c = -c;
                r.rhs = -r.rhs;
                r.rel = Relation::GE;
                inst.rows.push_back(std::move(r));
                break;
            }
            case Relation::EQ: {
                LpRow ge = r;
                ge.rel = Relation::GE;
                inst.rows.push_back(ge);
                for (double& c : r.coeffs) c = -c;
                r.rhs = -r.rhs;
                r.rel = Relation::GE;
                inst.rows.push_back(std::move(r));
                break;
            }
        }
    }
    return inst;
}

MbpInstance generate_mkp(const GeneratorConfig& config) {
    SplitMix64 rng(config.seed);
    const int n = config.n;
    const int m = config.m;

    std::vector<double> c(n);
    for (double& v : c) v = rng.uniform(1.0, 2.0);

    std::vector<LpRow> rows;
    rows.reserve(m);
    for (int i = 0; i < m; ++i) {
        LpRow row;
        row.coeffs.resize(n);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) {
            row.coeffs[j] = rng.uniform01();
            sum += row.coeffs[j];
        }
        row.rel = Relation::LE;
        row.rhs = 0.9 * sum;
        rows.push_back(std::move(row));
    }

    return canonicalize("mkp_n" + std::to_string(n), Sense::Max, std::move(c), std::move(rows),
                        n, {}, {}, config.seed);
}

MbpInstance generate_scp(const GeneratorConfig& config) {
    SplitMix64 rng(config.seed);
    const int n = config.n;
    const int m = config.m;

    std::vector<LpRow> rows;
    rows.reserve(m);
    for (int i = 0; i < m; ++i) {
        LpRow row;
        row.coeffs.assign(n, 0.0);
        int nonzeros = 0;
        do {
            nonzeros = 0;
            for (int j = 0; j < n; ++j) {
                row.coeffs[j] = (rng.uniform01() < config.density) ? 1.0 : 0.0;
                if (row.coeffs[j] != 0.0) ++nonzeros;
            }
        } while (nonzeros == 0);  // an empty row can never be covered
        row.rel = Relation::GE;
        row.rhs = 1.0;
        rows.push_back(std::move(row));
    }

    std::vector<double> c(n);
    for (double& v : c) v = rng.uniform(1.0, 2.0);

    const Sense sense = config.scp_literal_max_objective ? Sense::Max : Sense::Min;
    return canonicalize("scp_n" + std::to_string(n), sense, std::move(c), std::move(rows), n, {},
                        {}, config.seed);
}

MbpInstance perturb_objective(const MbpInstance& instance, std::uint64_t seed) {
    SplitMix64 rng(seed);
    MbpInstance out = instance;
    out.seed = seed;
    out.name = instance.name + "_p" + std::to_string(seed & 0xFFFF);
    const double flip = instance.original_sense == Sense::Max ? -1.0 : 1.0;
    for (int j = 0; j < out.n; ++j) {
        const double orig = flip * instance.objective[j];
        const double noisy = orig + rng.normal(0.0, 0.1 * std::abs(orig));
        out.objective[j] = flip * noisy;
    }
    return out;
}

}  // namespace treecut
