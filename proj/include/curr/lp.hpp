#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace curr {

/// minimize cost . x  subject to  A x = rhs, x >= 0.
/// Columns are sparse; rows are the equality constraints.
struct LpProblem {
    int rows = 0;
    int cols = 0;
    std::vector<double> cost;
    std::vector<std::vector<std::pair<int, double>>> columns; // per column: (row, coeff)
    std::vector<double> rhs;
    std::vector<std::string> names; // optional, for dumps

    int add_column(double c, std::vector<std::pair<int, double>> entries, std::string name = {});
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
    LpStatus status = LpStatus::optimal;
    double value = 0;
    std::vector<double> x;
};

/// Two-phase dense primal simplex. Deterministic: Dantzig pricing with
/// index tie-breaks, Bland's rule after a stall. Suited to the moderate
/// simplicial flat-norm instances this project produces.
LpResult solve_lp(const LpProblem& p);

/// CPLEX LP text format dump.
void write_lp_format(const LpProblem& p, std::ostream& os);

} // namespace curr
