#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "maxcon/geometry.hpp"

namespace maxcon {

// ---------- synthetic 1-D regression ----------

struct SyntheticSpec {
    int n_points = 20;
    double outlier_ratio = 0.2;  // floor(ratio * n) points get corrupted
    double sigma_in = 0.1;
    double sigma_out = 1.5;
    double epsilon = 0.1;
    uint64_t seed = 1;
};

struct SyntheticInstance {
    FittingProblem problem;          // dim 1, comb_dim 2
    std::vector<double> model;       // ground-truth x
    std::vector<uint8_t> inlier_mask;  // 1 = untouched by corruption
};

// a_i ~ U[0,1], b_i = a_i * x + noise (inlier sigma or outlier sigma),
// clamped to [0,1]; outlier indices are a uniform random subset of fixed
// size floor(ratio * n). Fully determined by the seed.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

// ---------- fundamental-matrix linearization ----------

struct CorrespondenceSet {
    std::vector<std::array<double, 4>> pairs;  // u1, v1, u2, v2
};

// Hartley-normalizes each image (centroid to origin, mean distance sqrt(2)),
// then emits one affine row per pair under the gauge F33 = 1:
//   a = [u'u, u'v, u', v'u, v'v, v', u, v],  b = -1,
// so |a'x - b| is the algebraic epipolar residual. dim 8, comb_dim 9.
// Requires at least 8 pairs and non-degenerate spreads in both images.
FittingProblem linearize_fundamental(const CorrespondenceSet& c, double epsilon);

// ---------- RANSAC baseline ----------

struct RansacResult {
    std::vector<int> consensus;  // ascending
    std::vector<double> model;
};

// Classic hypothesize-and-verify: each iteration draws dim distinct points
// on its own generator seeded with seed + iteration, solves the square
// system, and counts inliers; the best count wins, earliest iteration on
// ties, so results do not depend on evaluation order. Degenerate samples are
// skipped. Throws std::invalid_argument when n_points < dim.
RansacResult ransac_baseline(const FittingProblem& p, int iterations, uint64_t seed);

// ---------- files ----------
// Problems: "<a1>,...,<ad>,<b>" CSV with header a1..ad,b plus a JSON sidecar
// {"epsilon","dim","comb_dim"}. Correspondences: CSV with header u1,v1,u2,v2.
// Synthetic truth: JSON {"model","inlier_mask"}.

void write_problem_csv(const std::string& csv_path, const std::string& json_path,
                       const FittingProblem& p);
FittingProblem read_problem_csv(const std::string& csv_path, const std::string& json_path);

void write_truth_json(const std::string& path, const SyntheticInstance& inst);

void write_correspondences_csv(const std::string& path, const CorrespondenceSet& c);
CorrespondenceSet read_correspondences_csv(const std::string& path);

}  // namespace maxcon
