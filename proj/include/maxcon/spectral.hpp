#pragma once

#include <iosfwd>
#include <vector>

#include "maxcon/qubo.hpp"

namespace maxcon {

// Annealing interpolation H(s) = (1-s) * sum_i X_i + s * H_z, where X_i flips
// qubit i (hypercube adjacency with unit entries) and H_z is diagonal with
// entry sum_i h_i sigma_i + sum_{i<j} J_ij sigma_i sigma_j; qubit i maps to
// bit n-1-i of the basis index and sigma = +1 for a 0 bit. The minimum
// excitation gap over s controls how slowly hardware must sweep.

// Dense row-major 2^n x 2^n matrix of H(s). Guarded to n <= 12.
std::vector<double> hamiltonian(const IsingModel& m, double s);

struct GapProfile {
    std::vector<double> s;    // uniform grid on [0, 1]
    std::vector<double> gap;  // E1 - E0, eigenvalues counted with multiplicity
    double min_gap = 0.0;
    double argmin_s = 0.0;
    bool degenerate = false;  // ground state degenerate somewhere on the grid
};

// Two lowest eigenvalues of H(s) on a uniform grid (grid_points >= 3).
// Grid entries are computed independently and assembled by index, so the
// profile does not depend on evaluation order.
GapProfile spectral_gap(const IsingModel& m, int grid_points = 101);

// All eigenvalues, ascending. Cyclic Jacobi rotations; kept exact and simple
// for cross-checking and small blocks.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, int m);

// All eigenvalues, ascending, via Householder tridiagonalization followed by
// implicit-shift QL; the O(m^3)-total path used for large dimensions.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int m);

// CSV rows "s,gap" with a header line.
void write_gap_csv(std::ostream& os, const GapProfile& p);

// One penalty-sweep sample: the minimum gap of the model compiled at a given
// penalty weight.
struct LambdaGapRow {
    double lambda = 0.0;
    double min_gap = 0.0;
};

// CSV rows "lambda,min_gap" with a header line, round-tripping exactly.
void write_lambda_gap_csv(std::ostream& os, const std::vector<LambdaGapRow>& rows);
std::vector<LambdaGapRow> read_lambda_gap_csv(std::istream& is);

}  // namespace maxcon
