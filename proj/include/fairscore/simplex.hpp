#pragma once

#include <vector>

namespace fairscore {

// LP in the form  min c.x  s.t.  lo_i <= (Ax)_i <= hi_i,  l_j <= x_j <= u_j.
// Row bounds may be +-infinity; variable bounds must be finite.
struct LpProblem {
    int m = 0;  // rows
    int n = 0;  // structural variables
    std::vector<std::vector<double>> cols;  // n columns, each dense of size m
    std::vector<double> c;
    std::vector<double> row_lo, row_hi;
    std::vector<double> lo, up;
};

struct LpResult {
    enum Status { Optimal, Infeasible, Stalled };
    Status status = Stalled;
    double value = 0;
    std::vector<double> x;  // structural values (size n)
    std::vector<double> y;  // row duals; for Infeasible, a phase-1 ray
    int iterations = 0;
};

// Two-phase bounded-variable primal simplex (dense, Bland fallback under
// stalling). Deterministic for identical inputs.
LpResult solve_lp(const LpProblem& lp);

}  // namespace fairscore
