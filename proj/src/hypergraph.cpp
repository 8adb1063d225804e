#include "maxcon/hypergraph.hpp"

#include <algorithm>
#include <stdexcept>

#include "maxcon/simplex.hpp"

namespace maxcon {

Hyperedge make_edge(std::vector<int> vertices, int n_vertices, int max_size) {
    if (vertices.empty()) throw std::invalid_argument("edge: empty vertex list");
    std::sort(vertices.begin(), vertices.end());
    for (size_t k = 0; k < vertices.size(); ++k) {
        if (vertices[k] < 0 || vertices[k] >= n_vertices)
            throw std::invalid_argument("edge: vertex out of range");
        if (k > 0 && vertices[k] == vertices[k - 1])
            throw std::invalid_argument("edge: duplicate vertex");
    }
    if (static_cast<int>(vertices.size()) > max_size)
        throw std::invalid_argument("edge: larger than the maximum edge size");
    return Hyperedge{std::move(vertices)};
}

bool HyperedgeSet::add(Hyperedge e) {
    if (static_cast<int>(e.v.size()) > max_edge_size)
        throw std::invalid_argument("edge: larger than the maximum edge size");
    for (int u : e.v)
        if (u < 0 || u >= n_vertices) throw std::invalid_argument("edge: vertex out of range");
    if (!seen_.insert(e.v).second) return false;
    edges.push_back(std::move(e));
    return true;
}

int CoverVector::weight() const {
    int w = 0;
    for (uint8_t b : bits) w += b ? 1 : 0;
    return w;
}

HyperedgeSet enumerate_infeasible_bases(const FittingProblem& p) {
    p.validate();
    const int n = p.n_points();
    if (n > 25) throw std::invalid_argument("enumerate_infeasible_bases: instance too large (n > 25)");

    HyperedgeSet out;
    out.n_vertices = n;
    out.max_edge_size = p.comb_dim;

    // Grow subsets by size; a candidate containing an already-found edge is
    // infeasible but not minimal, so it is skipped without solving. Anything
    // that survives that containment check and tests infeasible has all
    // proper subsets feasible.
    std::vector<int> subset;
    auto contains_known_edge = [&](const std::vector<int>& s) {
        for (const auto& e : out.edges) {
            if (std::includes(s.begin(), s.end(), e.v.begin(), e.v.end())) return true;
        }
        return false;
    };
    for (int size = 1; size <= p.comb_dim; ++size) {
        subset.assign(size, 0);
        // plain lexicographic combination walk
        for (int k = 0; k < size; ++k) subset[k] = k;
        if (size > n) break;
        while (true) {
            if (!contains_known_edge(subset) && feasibility(p, subset) == 1)
                out.add(Hyperedge{subset});
            int k = size - 1;
            while (k >= 0 && subset[k] == n - size + k) --k;
            if (k < 0) break;
            ++subset[k];
            for (int j = k + 1; j < size; ++j) subset[j] = subset[j - 1] + 1;
        }
    }
    return out;
}

namespace {

struct CoverSearch {
    const HyperedgeSet* h = nullptr;
    std::vector<uint8_t> in_cover;
    std::vector<uint8_t> best;
    int cur_size = 0;
    int best_size = 0;

    int first_uncovered() const {
        for (int m = 0; m < h->size(); ++m) {
            bool covered = false;
            for (int u : h->edges[m].v) {
                if (in_cover[u]) { covered = true; break; }
            }
            if (!covered) return m;
        }
        return -1;
    }

    void dfs() {
        if (cur_size >= best_size) return;  // cannot strictly improve
        const int m = first_uncovered();
        if (m < 0) {
            best = in_cover;
            best_size = cur_size;
            return;
        }
        if (cur_size + 1 >= best_size) return;  // any fix costs one more vertex
        for (int u : h->edges[m].v) {
            in_cover[u] = 1;
            ++cur_size;
            dfs();
            --cur_size;
            in_cover[u] = 0;
        }
    }
};

}  // namespace

CoverResult solve_cover_exact(const HyperedgeSet& h) {
    if (h.n_vertices > 30)
        throw std::invalid_argument("solve_cover_exact: instance too large (n > 30)");
    CoverSearch s;
    s.h = &h;
    s.in_cover.assign(h.n_vertices, 0);
    s.best.assign(h.n_vertices, 1);
    s.best_size = h.n_vertices;
    if (h.edges.empty()) {
        CoverResult r;
        r.z.bits.assign(h.n_vertices, 0);
        r.size = 0;
        return r;
    }
    s.dfs();
    CoverResult r;
    r.z.bits = s.best;
    r.size = s.best_size;
    return r;
}

double lp_lower_bound(const HyperedgeSet& h) {
    if (h.edges.empty()) return 0.0;
    LpProblem lp;
    lp.c.assign(h.n_vertices, 1.0);
    lp.rows.reserve(h.edges.size());
    for (const auto& e : h.edges) {
        LpRow row;
        row.a.assign(h.n_vertices, 0.0);
        for (int u : e.v) row.a[u] = 1.0;
        row.rel = Rel::Ge;
        row.b = 1.0;
        lp.rows.push_back(std::move(row));
    }
    LpSolution sol = solve_lp(lp);
    if (!sol.feasible) throw std::runtime_error("lp_lower_bound: relaxation reported infeasible");
    return sol.value;
}

bool is_cover(const HyperedgeSet& h, const CoverVector& z) {
    if (static_cast<int>(z.bits.size()) != h.n_vertices)
        throw std::invalid_argument("is_cover: cover length mismatch");
    for (const auto& e : h.edges) {
        bool hit = false;
        for (int u : e.v) {
            if (z.bits[u]) { hit = true; break; }
        }
        if (!hit) return false;
    }
    return true;
}

}  // namespace maxcon
