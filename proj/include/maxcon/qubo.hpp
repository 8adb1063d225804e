#pragma once

#include <cstdint>
#include <iosfwd>
#include <tuple>
#include <vector>

#include "maxcon/hypergraph.hpp"

namespace maxcon {

// Penalty compilation of the minimum-vertex-cover program. Variables are
// v = [z_0..z_{N-1} | t_(0) | t_(1) | ...] where each constraint m owns a
// block of slack_width slack bits and enforces
//     sum_{i in edge_m} z_i - sum(t_(m)) = 1
// through a squared penalty weighted by lambda. The quadratic form is stored
// upper-triangular with the affine part folded into the diagonal, so the
// energy of an assignment v is  v'Qv + offset.
struct QuboProblem {
    int n = 0;            // total binary variables
    int n_z = 0;          // leading cover bits (number of points N)
    int slack_width = 0;  // slack bits per constraint (delta - 1)
    double lambda = 0.0;
    std::vector<double> q;  // row-major n x n, entries below the diagonal are zero
    double offset = 0.0;
    std::vector<std::vector<int>> constraints;  // edge vertex lists, insertion order

    double at(int i, int j) const { return q[static_cast<size_t>(i) * n + j]; }
    int slack_begin(int m) const { return n_z + m * slack_width; }
};

// Throws std::invalid_argument when an edge exceeds max_edge_size (enforced
// by HyperedgeSet) or lambda is not positive and finite.
QuboProblem build_qubo(const HyperedgeSet& h, double lambda);

double qubo_energy(const QuboProblem& q, const std::vector<uint8_t>& v);

struct Decoded {
    CoverVector z;
    int violations = 0;  // constraints whose slack-adjusted sum differs from 1
};

Decoded decode(const QuboProblem& q, const std::vector<uint8_t>& v);

// Spin model over s_i in {-1,+1} with energy  sum h_i s_i + sum_{i<j} J_ij s_i s_j.
// Mapping s = 2v - 1 gives  qubo_energy(q, v) = scale * (energy(s) + offset)
// exactly; scale = max(max|h|/2, max|J|, 1) before division, so afterwards
// |h| <= 2 and |J| <= 1.
struct IsingModel {
    int n = 0;
    std::vector<double> h;
    std::vector<std::tuple<int, int, double>> couplings;  // i < j, lexicographic
    double offset = 0.0;
    double scale = 1.0;
};

IsingModel to_ising(const QuboProblem& q);

// Offset is not included; see the identity above.
double ising_energy(const IsingModel& m, const std::vector<int>& s);

// Text export: "n nnz" header, one "i j value" triplet per nonzero
// upper-triangular entry (0-based, row-major order), then the offset on a
// trailing comment line "# offset <value>".
void write_qubo(std::ostream& os, const QuboProblem& q);

// Reads the matrix, dimensions, and offset back (constraint metadata is not
// part of the format). Throws std::invalid_argument on malformed input.
QuboProblem read_qubo(std::istream& is);

}  // namespace maxcon
