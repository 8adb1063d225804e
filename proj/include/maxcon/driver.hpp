#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "maxcon/anneal.hpp"
#include "maxcon/geometry.hpp"
#include "maxcon/hypergraph.hpp"

namespace maxcon {

enum class Variant { EarlyStop, Full };
enum class Backend { SimulatedAnnealing, Exact };

// Tuned-down annealing budget for the inner QUBO solves: the driver calls the
// annealer once per iteration on a growing problem, so it trades restarts for
// iterations. Fully overridable from the CLI.
AnnealConfig driver_default_anneal();

struct DriverConfig {
    int max_iterations = 100;
    double lambda_initial = 1.0;
    double lambda_floor = 0.01;
    double decay_factor = 2.0;  // divisor applied every decay_period iterations
    int decay_period = 50;
    double epsilon = 0.0;       // > 0 overrides the problem's threshold
    Variant variant = Variant::Full;
    Backend backend = Backend::SimulatedAnnealing;
    uint64_t seed = 1;
    AnnealConfig anneal = driver_default_anneal();
};

// Penalty weight in effect at 1-based iteration `iteration`: lambda_initial
// divided by decay_factor once per elapsed decay_period, clamped to
// lambda_floor, folded exactly the way the run applies it.
double penalty_at(const DriverConfig& cfg, int iteration);

struct IterationRecord {
    int iteration = 0;   // 1-based
    int edge_count = 0;  // |A| after this iteration's insertion attempt
    int z_norm = 0;      // weight of the decoded cover
    double lp_bound = 0.0;
    bool feasible = false;  // complement of the decoded cover is a consensus set
    double lambda = 0.0;
};

struct RunReport {
    int n_points = 0;
    double epsilon_used = 0.0;
    std::vector<int> consensus;     // best consensus set found (ascending)
    std::vector<double> witness;    // minimax minimizer over it (empty if consensus is)
    CoverVector z_best;
    double error_bound = 0.0;       // weight(z_best) - LP(final A)
    std::vector<IterationRecord> records;
    HyperedgeSet edges;             // sampled bases, insertion order
};

// Alternating loop: extract a basis from the current working subset, add it
// to the sampled hypergraph, compile the penalty QUBO, solve it with the
// configured backend, and test the decoded cover's complement geometrically.
// EarlyStop returns at the first consensus set; Full runs all iterations and
// keeps the smallest cover whose complement passed.
RunReport run(const FittingProblem& p, const DriverConfig& cfg);

// weight(z) - LP lower bound; requires z to cover the edge set (the caller
// must additionally know the complement is a consensus set for the value to
// bound the optimality error). Throws std::invalid_argument otherwise.
double error_bound(const CoverVector& z, const HyperedgeSet& edges);

// CSV rows "iter,edges,z_norm,lp_bound,feasible,lambda" with a header line.
void write_iterations_csv(std::ostream& os, const RunReport& r);

// Inverse of write_iterations_csv (used to audit emitted logs).
std::vector<IterationRecord> read_iterations_csv(std::istream& is);

}  // namespace maxcon
