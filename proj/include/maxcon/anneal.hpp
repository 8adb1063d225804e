#pragma once

#include <cstdint>
#include <vector>

#include "maxcon/qubo.hpp"

namespace maxcon {

struct AnnealConfig {
    int restarts = 1000;
    int sweeps = 0;             // 0 -> max(100, 10n)
    double temp_initial = 0.0;  // 0 -> max absolute matrix entry (1.0 if all zero)
    double temp_final = 0.0;    // 0 -> 1e-3 * temp_initial
    uint64_t seed = 1;
    int threads = 0;            // 0 -> hardware concurrency
};

struct AnnealResult {
    std::vector<uint8_t> best_v;
    double best_energy = 0.0;
    std::vector<double> energies;  // per-restart bests, each recomputed exactly
};

// Single-flip Metropolis with a geometric temperature schedule. Restart r
// runs on its own generator seeded with cfg.seed + r, so the first k entries
// of `energies` are the same for any larger restart budget, and the merged
// result (lowest energy, earliest restart on ties) is bit-identical whether
// restarts execute serially or across threads.
AnnealResult simulated_anneal(const QuboProblem& q, const AnnealConfig& cfg);

struct ExactResult {
    std::vector<uint8_t> best_v;
    double best_energy = 0.0;
};

// Exhaustive minimum by Gray-code enumeration; ties resolve to the lowest
// assignment value read as an unsigned integer with bit i weighted 2^i.
// Guarded to n <= 24.
ExactResult exact_solve(const QuboProblem& q);

}  // namespace maxcon
