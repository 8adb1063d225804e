#include "maxcon/anneal.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "maxcon/parallel.hpp"

namespace maxcon {

namespace {

// Energy change from toggling bit k: the diagonal term plus every coupling
// with a set partner, signed by the flip direction.
double flip_delta(const QuboProblem& q, const std::vector<uint8_t>& v, int k) {
    const int n = q.n;
    const double* qk = q.q.data() + static_cast<size_t>(k) * n;
    double acc = qk[k];
    for (int j = k + 1; j < n; ++j)
        if (v[j]) acc += qk[j];
    for (int i = 0; i < k; ++i)
        if (v[i]) acc += q.q[static_cast<size_t>(i) * n + k];
    return v[k] ? -acc : acc;
}

double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct RestartOutcome {
    std::vector<uint8_t> v;
    double energy = 0.0;
};

// Nonzero couplings of the symmetrized matrix in CSR form, so the sweep can
// touch only actual neighbours instead of scanning dense rows.
struct CouplingGraph {
    std::vector<int> start;  // n+1 offsets into the arrays below
    std::vector<int> peer;
    std::vector<double> weight;
};

CouplingGraph build_couplings(const QuboProblem& q) {
    const int n = q.n;
    CouplingGraph g;
    g.start.assign(n + 1, 0);
    for (int k = 0; k < n; ++k) {
        g.start[k] = static_cast<int>(g.peer.size());
        for (int i = 0; i < k; ++i) {
            const double w = q.q[static_cast<size_t>(i) * n + k];
            if (w != 0.0) {
                g.peer.push_back(i);
                g.weight.push_back(w);
            }
        }
        const double* qk = q.q.data() + static_cast<size_t>(k) * n;
        for (int j = k + 1; j < n; ++j)
            if (qk[j] != 0.0) {
                g.peer.push_back(j);
                g.weight.push_back(qk[j]);
            }
    }
    g.start[n] = static_cast<int>(g.peer.size());
    return g;
}

RestartOutcome run_restart(const QuboProblem& q, const CouplingGraph& g, uint64_t seed, int sweeps,
                           double t0, double t1) {
    const int n = q.n;
    std::mt19937_64 rng(seed);
    std::vector<uint8_t> v(n);
    for (int i = 0; i < n; ++i) v[i] = static_cast<uint8_t>((rng() >> 33) & 1u);

    // Cached local fields: field[k] = sum of couplings between k and every set
    // partner, so a flip proposal costs O(1) and only accepted flips pay a
    // neighbour update proportional to the degree.
    std::vector<double> field(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (v[k])
            for (int e = g.start[k]; e < g.start[k + 1]; ++e) field[g.peer[e]] += g.weight[e];

    double energy = qubo_energy(q, v);
    std::vector<uint8_t> best = v;
    double best_energy = energy;

    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    const double ratio = (sweeps > 1) ? std::pow(t1 / t0, 1.0 / (sweeps - 1)) : 1.0;

    double temp = t0;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (int i = n - 1; i > 0; --i) {  // Fisher-Yates reshuffle per sweep
            const int j = static_cast<int>(rng() % static_cast<uint64_t>(i + 1));
            std::swap(order[i], order[j]);
        }
        for (int k : order) {
            const double acc = q.q[static_cast<size_t>(k) * n + k] + field[k];
            const double d = v[k] ? -acc : acc;
            if (d <= 0.0 || canonical(rng) < std::exp(-d / temp)) {
                v[k] ^= 1u;
                energy += d;
                const double sign = v[k] ? 1.0 : -1.0;
                for (int e = g.start[k]; e < g.start[k + 1]; ++e)
                    field[g.peer[e]] += sign * g.weight[e];
                if (energy < best_energy) {
                    best_energy = energy;
                    best = v;
                }
            }
        }
        temp *= ratio;
    }
    RestartOutcome out;
    out.v = std::move(best);
    out.energy = qubo_energy(q, out.v);  // exact, clears incremental roundoff
    return out;
}

}  // namespace

AnnealResult simulated_anneal(const QuboProblem& q, const AnnealConfig& cfg) {
    if (q.n <= 0) throw std::invalid_argument("simulated_anneal: empty problem");
    if (cfg.restarts < 1) throw std::invalid_argument("simulated_anneal: restarts must be >= 1");
    if (cfg.sweeps < 0) throw std::invalid_argument("simulated_anneal: sweeps must be >= 0");
    if (cfg.temp_initial < 0.0 || !std::isfinite(cfg.temp_initial) ||
        cfg.temp_final < 0.0 || !std::isfinite(cfg.temp_final))
        throw std::invalid_argument("simulated_anneal: temperatures must be finite and >= 0");

    const int sweeps = cfg.sweeps > 0 ? cfg.sweeps : std::max(100, 10 * q.n);
    double t0 = cfg.temp_initial;
    if (t0 <= 0.0) {
        for (double x : q.q) t0 = std::max(t0, std::abs(x));
        if (t0 <= 0.0) t0 = 1.0;
    }
    const double t1 = cfg.temp_final > 0.0 ? cfg.temp_final : 1e-3 * t0;

    const CouplingGraph graph = build_couplings(q);
    std::vector<RestartOutcome> slots(cfg.restarts);
    parallel_for(cfg.restarts, cfg.threads, [&](int r) {
        slots[r] = run_restart(q, graph, cfg.seed + static_cast<uint64_t>(r), sweeps, t0, t1);
    });

    AnnealResult res;
    res.energies.resize(cfg.restarts);
    int best_r = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        res.energies[r] = slots[r].energy;
        if (slots[r].energy < slots[best_r].energy) best_r = r;
    }
    res.best_v = slots[best_r].v;
    res.best_energy = slots[best_r].energy;
    return res;
}

ExactResult exact_solve(const QuboProblem& q) {
    if (q.n <= 0) throw std::invalid_argument("exact_solve: empty problem");
    if (q.n > 24) throw std::invalid_argument("exact_solve: instance too large (n > 24)");

    const int n = q.n;
    std::vector<uint8_t> v(n, 0);
    double energy = q.offset;
    uint32_t value = 0;

    std::vector<uint8_t> best_v = v;
    double best_energy = energy;
    uint32_t best_value = 0;

    const uint64_t total = 1ull << n;
    for (uint64_t k = 1; k < total; ++k) {
        // Successive Gray codes differ in exactly the lowest set bit of k.
        const int bit = static_cast<int>(__builtin_ctzll(k));
        energy += flip_delta(q, v, bit);
        v[bit] ^= 1u;
        value ^= 1u << bit;
        if (energy < best_energy || (energy == best_energy && value < best_value)) {
            best_energy = energy;
            best_value = value;
            best_v = v;
        }
    }
    ExactResult out;
    out.best_v = std::move(best_v);
    out.best_energy = qubo_energy(q, out.best_v);
    return out;
}

}  // namespace maxcon
