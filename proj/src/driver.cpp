#include "maxcon/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace maxcon {

AnnealConfig driver_default_anneal() {
    AnnealConfig cfg;
    cfg.restarts = 4;
    cfg.sweeps = 0;  // auto-scaled with the compiled size
    return cfg;
}

double penalty_at(const DriverConfig& cfg, int iteration) {
    double lam = cfg.lambda_initial;
    if (cfg.decay_period > 0) {
        const int decays = iteration / cfg.decay_period;
        for (int k = 0; k < decays; ++k)
            lam = std::max(lam / cfg.decay_factor, cfg.lambda_floor);
    }
    return lam;
}

namespace {

std::vector<int> complement_of(const std::vector<uint8_t>& bits) {
    std::vector<int> out;
    for (size_t i = 0; i < bits.size(); ++i)
        if (!bits[i]) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> all_points(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

}  // namespace

RunReport run(const FittingProblem& problem, const DriverConfig& cfg) {
    problem.validate();
    if (cfg.max_iterations < 1) throw std::invalid_argument("run: max_iterations must be >= 1");
    if (cfg.decay_period < 1) throw std::invalid_argument("run: decay_period must be >= 1");
    if (!(cfg.decay_factor >= 1.0)) throw std::invalid_argument("run: decay_factor must be >= 1");
    if (!(cfg.lambda_initial > 0.0)) throw std::invalid_argument("run: lambda_initial must be > 0");
    if (!(cfg.lambda_floor > 0.0)) throw std::invalid_argument("run: lambda_floor must be > 0");

    FittingProblem p = problem;
    if (cfg.epsilon > 0.0) p.epsilon = cfg.epsilon;
    const int n = p.n_points();

    RunReport rep;
    rep.n_points = n;
    rep.epsilon_used = p.epsilon;
    rep.edges.n_vertices = n;
    rep.edges.max_edge_size = p.comb_dim;
    rep.z_best.bits.assign(n, 1);

    const std::vector<int> everything = all_points(n);
    if (feasibility(p, everything) == 0) {
        rep.z_best.bits.assign(n, 0);
        rep.consensus = everything;
        rep.witness = minimax(p, everything).minimizer;
        rep.error_bound = 0.0;
        return rep;
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<int> working = everything;  // infeasible on entry to each iteration
    std::vector<int> best_set;

    for (int m = 1; m <= cfg.max_iterations; ++m) {
        rep.edges.add(Hyperedge{extract_basis(p, working)});
        const double lambda = penalty_at(cfg, m);

        const QuboProblem q = build_qubo(rep.edges, lambda);
        std::vector<uint8_t> v;
        if (cfg.backend == Backend::Exact) {
            v = exact_solve(q).best_v;
        } else {
            AnnealConfig ac = cfg.anneal;
            ac.seed = rng();
            v = simulated_anneal(q, ac).best_v;
        }
        const Decoded dec = decode(q, v);

        IterationRecord rec;
        rec.iteration = m;
        rec.edge_count = rep.edges.size();
        rec.z_norm = dec.z.weight();
        rec.lp_bound = lp_lower_bound(rep.edges);
        rec.lambda = lambda;

        std::vector<int> rest = complement_of(dec.z.bits);
        rec.feasible = feasibility(p, rest) == 0;
        rep.records.push_back(rec);

        if (rec.feasible) {
            if (dec.z.weight() < rep.z_best.weight()) {
                rep.z_best = dec.z;
                best_set = rest;
            }
            if (cfg.variant == Variant::EarlyStop) break;
            // Resample: keep the removed vertices, re-admit each current
            // inlier on a fair coin, and insist the result is infeasible so
            // the next basis extraction has something to grab.
            bool found = false;
            for (int attempt = 0; attempt < 10 && !found; ++attempt) {
                std::vector<int> next;
                for (int i = 0; i < n; ++i)
                    if (dec.z.bits[i]) next.push_back(i);
                for (int i : rest)
                    if ((rng() >> 40) & 1ull) next.push_back(i);
                std::sort(next.begin(), next.end());
                if (!next.empty() && feasibility(p, next) == 1) {
                    working = std::move(next);
                    found = true;
                }
            }
            if (!found) working = everything;
        } else {
            working = std::move(rest);
        }
    }

    rep.consensus = best_set;
    if (!best_set.empty()) rep.witness = minimax(p, best_set).minimizer;
    rep.error_bound = rep.z_best.weight() - lp_lower_bound(rep.edges);
    return rep;
}

double error_bound(const CoverVector& z, const HyperedgeSet& edges) {
    if (!is_cover(edges, z))
        throw std::invalid_argument("error_bound: assignment does not cover the edge set");
    return z.weight() - lp_lower_bound(edges);
}

void write_iterations_csv(std::ostream& os, const RunReport& r) {
    os << "iter,edges,z_norm,lp_bound,feasible,lambda\n";
    char buf[64];
    for (const auto& rec : r.records) {
        os << rec.iteration << ',' << rec.edge_count << ',' << rec.z_norm << ',';
        std::snprintf(buf, sizeof buf, "%.17g", rec.lp_bound);
        os << buf << ',' << (rec.feasible ? 1 : 0) << ',';
        std::snprintf(buf, sizeof buf, "%.17g", rec.lambda);
        os << buf << '\n';
    }
}

std::vector<IterationRecord> read_iterations_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "iter,edges,z_norm,lp_bound,feasible,lambda")
        throw std::invalid_argument("iteration log: bad header");
    std::vector<IterationRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        IterationRecord rec;
        char c = 0;
        int feas = 0;
        if (!(ls >> rec.iteration >> c >> rec.edge_count >> c >> rec.z_norm >> c >>
              rec.lp_bound >> c >> feas >> c >> rec.lambda))
            throw std::invalid_argument("iteration log: bad row");
        rec.feasible = feas != 0;
        out.push_back(rec);
    }
    return out;
}

}  // namespace maxcon
