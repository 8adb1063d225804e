#pragma once

#include <vector>

namespace maxcon {

// Robust-fitting instance with absolute affine residuals r_i(x) = |a_i'x - b_i|.
// A subset C of points is a consensus set when g(C) = min_x max_{i in C} r_i(x)
// stays within the inlier threshold epsilon. Point indices are 0-based.
struct FittingProblem {
    int dim = 0;                  // model dimension d
    int comb_dim = 0;             // maximum basis size (d + 1 for these residuals)
    double epsilon = 0.0;
    std::vector<double> coeffs;   // row-major n_points x dim
    std::vector<double> offsets;  // n_points

    int n_points() const { return static_cast<int>(offsets.size()); }

    // |a_i'x - b_i|; throws std::invalid_argument on index/dimension mismatch.
    double residual(int i, const std::vector<double>& x) const;

    // Throws std::invalid_argument when shapes/threshold are inconsistent.
    void validate() const;
};

struct SubsetValue {
    double value = 0.0;               // g(C)
    std::vector<double> minimizer;    // an optimal x
    std::vector<int> active;          // ascending indices attaining the max
};

// Chebyshev subproblem over a subset: min_x max_{i in C} r_i(x), solved as a
// linear program. g({}) = 0 by convention, with a zero minimizer.
SubsetValue minimax(const FittingProblem& p, const std::vector<int>& subset);

// Infeasibility indicator: 1 when g(C) > epsilon, else 0. f({}) = 0.
int feasibility(const FittingProblem& p, const std::vector<int>& subset);

// Shrinks an infeasible subset to a minimal one preserving its minimax value:
// the result B satisfies |B| <= comb_dim, g(B) == g(V') within relative
// tolerance, and removing any single element of B strictly lowers g.
// Throws std::invalid_argument on an empty subset, std::runtime_error if the
// greedy reduction cannot reach comb_dim elements.
std::vector<int> extract_basis(const FittingProblem& p, const std::vector<int>& subset);

}  // namespace maxcon
