#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "maxcon/geometry.hpp"

namespace maxcon {

// Vertices are point indices 0..n_vertices-1. An edge is a sorted, duplicate-
// free vertex list; the hypergraph collects minimal infeasible bases, so a
// vertex cover of it is exactly an outlier set whose removal restores
// consensus.

struct Hyperedge {
    std::vector<int> v;  // strictly ascending
};

// Sorts, checks bounds/duplicates/size; throws std::invalid_argument.
Hyperedge make_edge(std::vector<int> vertices, int n_vertices, int max_size);

struct HyperedgeSet {
    int n_vertices = 0;
    int max_edge_size = 0;  // combinatorial dimension delta
    std::vector<Hyperedge> edges;  // insertion order preserved

    // False (and no insertion) when the edge is already present.
    bool add(Hyperedge e);
    int size() const { return static_cast<int>(edges.size()); }

  private:
    std::set<std::vector<int>> seen_;
};

struct CoverVector {
    std::vector<uint8_t> bits;  // one per vertex
    int weight() const;
};

// All minimal infeasible subsets of size <= comb_dim: every listed subset is
// infeasible while each of its proper subsets is feasible. Guarded to
// n_points <= 25.
HyperedgeSet enumerate_infeasible_bases(const FittingProblem& p);

struct CoverResult {
    CoverVector z;
    int size = 0;
};

// Minimum vertex cover by depth-first branch and bound: branch on the first
// uncovered edge in insertion order, vertices in ascending order, pruning
// against the incumbent. Guarded to n_vertices <= 30.
CoverResult solve_cover_exact(const HyperedgeSet& h);

// Optimum of the relaxation  min 1'z  s.t.  sum_{i in e} z_i >= 1,  z >= 0
// (upper bounds z <= 1 are redundant for 0/1 edge incidence and omitted).
double lp_lower_bound(const HyperedgeSet& h);

bool is_cover(const HyperedgeSet& h, const CoverVector& z);

}  // namespace maxcon
