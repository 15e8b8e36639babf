#pragma once

#include <vector>

namespace disclose {

struct LpResult {
    double value = 0.0;
    std::vector<double> x;
    int iterations = 0;
};

// Dense two-phase primal simplex for
//   max c.x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  x >= 0,
// with b_le >= 0. Dantzig pricing, switching to Bland's rule after a run of
// degenerate pivots. Throws InfeasibleLp when phase one cannot reach zero and
// DomainError when the objective is unbounded.
LpResult lp_maximize(const std::vector<double>& c, const std::vector<std::vector<double>>& A_eq,
                     const std::vector<double>& b_eq, const std::vector<std::vector<double>>& A_le,
                     const std::vector<double>& b_le);

} // namespace disclose
