#include "maxcon/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace maxcon {

namespace {

constexpr double kEps = 1e-9;

struct Tableau {
    int rows = 0;
    int cols = 0;               // structural + slack + artificial
    std::vector<double> t;      // rows x cols
    std::vector<double> rhs;    // rows, kept >= 0
    std::vector<int> basis;     // basic column per row
    std::vector<double> cost;   // pricing row, length cols

    double& at(int r, int c) { return t[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return t[static_cast<size_t>(r) * cols + c]; }

    void pivot(int pr, int pc) {
        const double pv = at(pr, pc);
        for (int j = 0; j < cols; ++j) at(pr, j) /= pv;
        rhs[pr] /= pv;
        at(pr, pc) = 1.0;  // kill roundoff on the pivot itself
        for (int r = 0; r < rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (int j = 0; j < cols; ++j) at(r, j) -= f * at(pr, j);
            at(r, pc) = 0.0;
            rhs[r] -= f * rhs[pr];
            if (rhs[r] < 0.0 && rhs[r] > -kEps) rhs[r] = 0.0;
        }
        const double cf = cost[pc];
        if (cf != 0.0) {
            for (int j = 0; j < cols; ++j) cost[j] -= cf * at(pr, j);
            cost[pc] = 0.0;
        }
        basis[pr] = pc;
    }

    // Bland's rule: entering = lowest eligible index with negative reduced
    // cost, leaving = lowest basic index among minimum-ratio rows.
    // eligible(j) gates which columns may enter.
    void minimize(const std::vector<uint8_t>& eligible) {
        const long cap = 20000L + 200L * (rows + cols);
        for (long it = 0; it <= cap; ++it) {
            int enter = -1;
            for (int j = 0; j < cols; ++j) {
                if (eligible[j] && cost[j] < -kEps) { enter = j; break; }
            }
            if (enter < 0) return;  // optimal
            int leave = -1;
            double best_ratio = 0.0;
            for (int r = 0; r < rows; ++r) {
                const double a = at(r, enter);
                if (a <= kEps) continue;
                const double ratio = std::max(rhs[r], 0.0) / a;
                if (leave < 0 || ratio < best_ratio - kEps ||
                    (ratio <= best_ratio + kEps && basis[r] < basis[leave])) {
                    leave = r;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) throw std::runtime_error("simplex: unbounded objective");
            pivot(leave, enter);
        }
        throw std::runtime_error("simplex: pivot cap exceeded");
    }
};

}  // namespace

LpSolution solve_lp(const LpProblem& lp) {
    const int nvar = static_cast<int>(lp.c.size());
    const int m = static_cast<int>(lp.rows.size());
    for (const auto& row : lp.rows) {
        if (static_cast<int>(row.a.size()) != nvar)
            throw std::invalid_argument("solve_lp: row length does not match objective");
    }
    if (!lp.free_var.empty() && static_cast<int>(lp.free_var.size()) != nvar)
        throw std::invalid_argument("solve_lp: free_var length does not match objective");

    // Column layout: x+ for every variable, x- for free ones, slack/surplus
    // per inequality row, artificials appended as needed.
    std::vector<int> minus_col(nvar, -1);
    int ncols = nvar;
    for (int j = 0; j < nvar; ++j) {
        if (!lp.free_var.empty() && lp.free_var[j]) minus_col[j] = ncols++;
    }
    std::vector<int> slack_col(m, -1);
    for (int r = 0; r < m; ++r) {
        if (lp.rows[r].rel != Rel::Eq) slack_col[r] = ncols++;
    }
    const int first_artificial = ncols;

    // Count artificials: a row needs one unless its slack enters with +1
    // after the rhs sign normalization.
    std::vector<int> art_col(m, -1);
    for (int r = 0; r < m; ++r) {
        const bool flip = lp.rows[r].b < 0.0;
        const double s = (lp.rows[r].rel == Rel::Le) ? 1.0 : (lp.rows[r].rel == Rel::Ge ? -1.0 : 0.0);
        const double s_after = flip ? -s : s;
        if (s_after != 1.0) art_col[r] = ncols++;
    }

    Tableau tb;
    tb.rows = m;
    tb.cols = ncols;
    tb.t.assign(static_cast<size_t>(m) * ncols, 0.0);
    tb.rhs.assign(m, 0.0);
    tb.basis.assign(m, -1);

    for (int r = 0; r < m; ++r) {
        const auto& row = lp.rows[r];
        const double sgn = row.b < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < nvar; ++j) {
            const double a = sgn * row.a[j];
            tb.at(r, j) = a;
            if (minus_col[j] >= 0) tb.at(r, minus_col[j]) = -a;
        }
        if (slack_col[r] >= 0) {
            const double s = (row.rel == Rel::Le) ? 1.0 : -1.0;
            tb.at(r, slack_col[r]) = sgn * s;
        }
        tb.rhs[r] = sgn * row.b;
        if (art_col[r] >= 0) {
            tb.at(r, art_col[r]) = 1.0;
            tb.basis[r] = art_col[r];
        } else {
            tb.basis[r] = slack_col[r];
        }
    }

    std::vector<uint8_t> eligible(ncols, 1);

    // Phase 1: minimize the sum of artificials.
    if (first_artificial < ncols) {
        tb.cost.assign(ncols, 0.0);
        for (int j = first_artificial; j < ncols; ++j) tb.cost[j] = 1.0;
        for (int r = 0; r < m; ++r) {
            if (tb.basis[r] >= first_artificial) {
                for (int j = 0; j < ncols; ++j) tb.cost[j] -= tb.at(r, j);
            }
        }
        tb.minimize(eligible);

        double infeas = 0.0;
        for (int r = 0; r < m; ++r) {
            if (tb.basis[r] >= first_artificial) infeas += std::max(tb.rhs[r], 0.0);
        }
        if (infeas > 1e-7) return LpSolution{};  // infeasible

        // Pivot remaining artificials out where a nonzero structural entry
        // exists; rows without one are redundant and stay put at level zero.
        for (int r = 0; r < m; ++r) {
            if (tb.basis[r] < first_artificial) continue;
            for (int j = 0; j < first_artificial; ++j) {
                if (std::abs(tb.at(r, j)) > kEps) { tb.pivot(r, j); break; }
            }
        }
    }

    // Phase 2: original objective; artificials may never re-enter.
    for (int j = first_artificial; j < ncols; ++j) eligible[j] = 0;
    tb.cost.assign(ncols, 0.0);
    for (int j = 0; j < nvar; ++j) {
        tb.cost[j] = lp.c[j];
        if (minus_col[j] >= 0) tb.cost[minus_col[j]] = -lp.c[j];
    }
    for (int r = 0; r < m; ++r) {
        const int b = tb.basis[r];
        const double cb = tb.cost[b];
        if (cb != 0.0) {
            for (int j = 0; j < ncols; ++j) tb.cost[j] -= cb * tb.at(r, j);
            tb.cost[b] = 0.0;
        }
    }
    tb.minimize(eligible);

    std::vector<double> ext(ncols, 0.0);
    for (int r = 0; r < m; ++r) ext[tb.basis[r]] = std::max(tb.rhs[r], 0.0);

    LpSolution sol;
    sol.feasible = true;
    sol.x.assign(nvar, 0.0);
    for (int j = 0; j < nvar; ++j) {
        sol.x[j] = ext[j] - (minus_col[j] >= 0 ? ext[minus_col[j]] : 0.0);
        sol.value += lp.c[j] * sol.x[j];
    }
    return sol;
}

}  // namespace maxcon
