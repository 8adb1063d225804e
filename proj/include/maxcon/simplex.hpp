#pragma once

#include <cstdint>
#include <vector>

namespace maxcon {

// Dense two-phase simplex with Bland's anti-cycling rule.
//
// Solves   min c'x   s.t.  a_r'x (<=|>=|==) b_r  for every row r,
// where each variable is either nonnegative or free (free variables are
// split internally into a difference of two nonnegative ones).

enum class Rel { Le, Ge, Eq };

struct LpRow {
    std::vector<double> a;
    Rel rel = Rel::Le;
    double b = 0.0;
};

struct LpProblem {
    std::vector<double> c;          // objective, one entry per variable
    std::vector<LpRow> rows;
    std::vector<uint8_t> free_var;  // 1 = unrestricted sign; empty means all >= 0
};

struct LpSolution {
    bool feasible = false;
    double value = 0.0;
    std::vector<double> x;
};

// Throws std::invalid_argument on malformed input (row length mismatch),
// std::runtime_error if the problem is unbounded or the pivot loop fails to
// terminate within its safety cap.
LpSolution solve_lp(const LpProblem& lp);

}  // namespace maxcon
