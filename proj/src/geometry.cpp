#include "maxcon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxcon/simplex.hpp"

namespace maxcon {

namespace {

constexpr double kActiveTol = 1e-9;   // activity detection, relative
constexpr double kBasisTol = 1e-7;    // value-equality during basis reduction

void check_subset(const FittingProblem& p, const std::vector<int>& subset) {
    std::vector<int> sorted(subset);
    std::sort(sorted.begin(), sorted.end());
    for (size_t k = 0; k < sorted.size(); ++k) {
        if (sorted[k] < 0 || sorted[k] >= p.n_points())
            throw std::invalid_argument("subset index out of range");
        if (k > 0 && sorted[k] == sorted[k - 1])
            throw std::invalid_argument("subset index repeated");
    }
}

}  // namespace

double FittingProblem::residual(int i, const std::vector<double>& x) const {
    if (i < 0 || i >= n_points()) throw std::invalid_argument("residual: index out of range");
    if (static_cast<int>(x.size()) != dim)
        throw std::invalid_argument("residual: model dimension mismatch");
    double acc = -offsets[i];
    const double* row = coeffs.data() + static_cast<size_t>(i) * dim;
    for (int j = 0; j < dim; ++j) acc += row[j] * x[j];
    return std::abs(acc);
}

void FittingProblem::validate() const {
    if (dim < 1) throw std::invalid_argument("problem: dim must be positive");
    if (comb_dim < 1) throw std::invalid_argument("problem: comb_dim must be positive");
    if (epsilon < 0.0 || !std::isfinite(epsilon))
        throw std::invalid_argument("problem: epsilon must be finite and nonnegative");
    if (coeffs.size() != offsets.size() * static_cast<size_t>(dim))
        throw std::invalid_argument("problem: coefficient matrix shape mismatch");
    for (double v : coeffs)
        if (!std::isfinite(v)) throw std::invalid_argument("problem: nonfinite coefficient");
    for (double v : offsets)
        if (!std::isfinite(v)) throw std::invalid_argument("problem: nonfinite offset");
}

SubsetValue minimax(const FittingProblem& p, const std::vector<int>& subset) {
    check_subset(p, subset);
    SubsetValue out;
    out.minimizer.assign(p.dim, 0.0);
    if (subset.empty()) return out;

    // Variables (x, gamma): minimize gamma subject to
    //   a_i'x - gamma <= b_i   and   -a_i'x - gamma <= -b_i.
    LpProblem lp;
    const int d = p.dim;
    lp.c.assign(d + 1, 0.0);
    lp.c[d] = 1.0;
    lp.free_var.assign(d + 1, 1);
    lp.free_var[d] = 0;  // gamma >= 0 is implied but keeping it tightens the tableau
    lp.rows.reserve(2 * subset.size());
    for (int i : subset) {
        const double* row = p.coeffs.data() + static_cast<size_t>(i) * d;
        LpRow up, dn;
        up.a.assign(d + 1, 0.0);
        dn.a.assign(d + 1, 0.0);
        for (int j = 0; j < d; ++j) {
            up.a[j] = row[j];
            dn.a[j] = -row[j];
        }
        up.a[d] = -1.0;
        dn.a[d] = -1.0;
        up.rel = Rel::Le;
        dn.rel = Rel::Le;
        up.b = p.offsets[i];
        dn.b = -p.offsets[i];
        lp.rows.push_back(std::move(up));
        lp.rows.push_back(std::move(dn));
    }
    LpSolution sol = solve_lp(lp);
    if (!sol.feasible) throw std::runtime_error("minimax: subproblem reported infeasible");

    for (int j = 0; j < d; ++j) out.minimizer[j] = sol.x[j];

    // Evaluate residuals at the minimizer; the true value is their max (the
    // LP gamma can only differ from it by pivot roundoff).
    double g = 0.0;
    std::vector<double> res(subset.size(), 0.0);
    for (size_t k = 0; k < subset.size(); ++k) {
        res[k] = p.residual(subset[k], out.minimizer);
        g = std::max(g, res[k]);
    }
    out.value = g;
    const double tol = kActiveTol * std::max(1.0, g);
    for (size_t k = 0; k < subset.size(); ++k) {
        if (res[k] >= g - tol) out.active.push_back(subset[k]);
    }
    std::sort(out.active.begin(), out.active.end());
    out.active.erase(std::unique(out.active.begin(), out.active.end()), out.active.end());
    return out;
}

int feasibility(const FittingProblem& p, const std::vector<int>& subset) {
    if (subset.empty()) return 0;
    return minimax(p, subset).value > p.epsilon ? 1 : 0;
}

std::vector<int> extract_basis(const FittingProblem& p, const std::vector<int>& subset) {
    if (subset.empty()) throw std::invalid_argument("extract_basis: empty subset");
    check_subset(p, subset);

    SubsetValue whole = minimax(p, subset);
    std::vector<int> basis = whole.active;
    const double g0 = whole.value;
    const double floor = g0 - kBasisTol * std::max(1.0, g0);

    // Drop, lowest index first, any element whose removal keeps g unchanged;
    // rescan from the start after every removal until nothing is droppable.
    // Every trial is compared against the original value so the tolerance
    // cannot accumulate across removals.
    bool changed = true;
    while (changed && basis.size() > 1) {
        changed = false;
        for (size_t k = 0; k < basis.size(); ++k) {
            std::vector<int> trial;
            trial.reserve(basis.size() - 1);
            for (size_t j = 0; j < basis.size(); ++j)
                if (j != k) trial.push_back(basis[j]);
            if (minimax(p, trial).value >= floor) {
                basis.swap(trial);
                changed = true;
                break;
            }
        }
    }
    if (static_cast<int>(basis.size()) > p.comb_dim)
        throw std::runtime_error("extract_basis: reduction exceeded combinatorial dimension");
    return basis;
}

}  // namespace maxcon
