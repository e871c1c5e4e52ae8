#pragma once

#include <string>
#include <vector>

namespace treecut {

enum class CutSource { Obj, Sti, CglpO1, CglpO2, CglpO3 };

const char* to_string(CutSource s);

/// Valid inequality pi'x >= pi0 in the original variables, canonical
/// (min) orientation.
struct Cut {
    std::vector<double> pi;
    double pi0 = 0.0;
    CutSource source = CutSource::Obj;
    double violation_at_generation = 0.0;
    int generation_index = 0;

    double violation_at(const std::vector<double>& x) const {
        double v = pi0;
        for (std::size_t j = 0; j < pi.size(); ++j) v -= pi[j] * x[j];
        return v;
    }
};

}  // namespace treecut
