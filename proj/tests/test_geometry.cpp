#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "maxcon/geometry.hpp"
#include "oracles.hpp"

using maxcon::extract_basis;
using maxcon::feasibility;
using maxcon::FittingProblem;
using maxcon::minimax;

TEST_CASE("residual is the absolute linear error") {
    FittingProblem p;
    p.dim = 2;
    p.comb_dim = 3;
    p.epsilon = 0.1;
    p.coeffs = {2.0, -1.0};
    p.offsets = {3.0};
    CHECK(p.residual(0, {1.0, 1.0}) == doctest::Approx(2.0));
    CHECK_THROWS_AS((void)p.residual(0, {1.0}), std::invalid_argument);
}

TEST_CASE("problem validation rejects malformed inputs") {
    FittingProblem p = oracle::make_problem_1d({1.0, 1.0}, {0.0, 1.0}, 0.5);
    CHECK_NOTHROW(p.validate());
    p.epsilon = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.epsilon = 0.5;
    p.coeffs.pop_back();
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("minimax on scalar points is the interval midpoint fit") {
    // Points (1, b) reduce to Chebyshev centring: value (max b - min b) / 2.
    auto p = oracle::make_problem_1d({1.0, 1.0, 1.0}, {0.0, 1.0, 4.0}, 0.5);
    auto s = minimax(p, {0, 1, 2});
    CHECK(s.value == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s.minimizer[0] == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(s.active.size() == 2);
    CHECK(s.active[0] == 0);
    CHECK(s.active[1] == 2);

    auto pair = minimax(p, {0, 2});
    CHECK(pair.value == doctest::Approx(2.0).epsilon(1e-9));

    auto single = minimax(p, {2});
    CHECK(single.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(single.minimizer[0] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("minimax handles empty and invalid subsets") {
    auto p = oracle::make_problem_1d({1.0}, {1.0}, 0.5);
    auto s = minimax(p, {});
    CHECK(s.value == 0.0);
    CHECK(s.active.empty());
    CHECK_THROWS_AS((void)minimax(p, {5}), std::invalid_argument);
    CHECK_THROWS_AS((void)minimax(p, {0, 0}), std::invalid_argument);
}

TEST_CASE("infeasibility indicator thresholds at the tolerance") {
    auto p = oracle::make_problem_1d({1.0, 1.0}, {0.0, 4.0}, 0.5);
    CHECK(feasibility(p, {0, 1}) == 1);  // best fit misses by 2 > 0.5
    CHECK(feasibility(p, {0}) == 0);
    CHECK(feasibility(p, {}) == 0);

    auto wide = oracle::make_problem_1d({1.0, 1.0}, {0.0, 4.0}, 2.0);
    CHECK(feasibility(wide, {0, 1}) == 0);  // met exactly at the boundary
}

TEST_CASE("minimax value grows with the subset") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 25; ++t) {
        auto p = oracle::random_instance_1d(rng, 8, 2, 0.1);
        std::vector<int> all(8);
        for (int i = 0; i < 8; ++i) all[i] = i;
        std::shuffle(all.begin(), all.end(), rng);
        const int k2 = 2 + static_cast<int>(rng() % 6);
        const int k1 = 1 + static_cast<int>(rng() % k2);
        std::vector<int> big(all.begin(), all.begin() + k2);
        std::vector<int> small(big.begin(), big.begin() + k1);
        std::sort(big.begin(), big.end());
        std::sort(small.begin(), small.end());
        CHECK(minimax(p, small).value <= minimax(p, big).value + 1e-9);
    }
}

TEST_CASE("active constraints reproduce the subset value") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 25; ++t) {
        auto p = oracle::random_instance_1d(rng, 10, 3, 0.1);
        std::vector<int> sub;
        for (int i = 0; i < 10; ++i)
            if (rng() & 1) sub.push_back(i);
        if (sub.empty()) sub.push_back(0);
        auto s = minimax(p, sub);
        REQUIRE(!s.active.empty());
        CHECK(minimax(p, s.active).value == doctest::Approx(s.value).epsilon(1e-7));
    }
}

TEST_CASE("basis of the midpoint example is the extreme pair") {
    auto p = oracle::make_problem_1d({1.0, 1.0, 1.0}, {0.0, 1.0, 4.0}, 0.5);
    auto b = extract_basis(p, {0, 1, 2});
    REQUIRE(b.size() == 2);
    CHECK(b[0] == 0);
    CHECK(b[1] == 2);
    CHECK_THROWS_AS((void)extract_basis(p, {}), std::invalid_argument);
}

TEST_CASE("extracted bases are small, infeasible, and irreducible") {
    std::mt19937_64 rng(13);
    int checked = 0;
    for (int t = 0; t < 40; ++t) {
        auto p = oracle::random_instance_1d(rng, 9, 3, 0.05);
        std::vector<int> sub;
        for (int i = 0; i < 9; ++i)
            if (rng() % 4) sub.push_back(i);
        if (sub.size() < 2 || feasibility(p, sub) == 0) continue;
        ++checked;
        auto b = extract_basis(p, sub);
        REQUIRE(!b.empty());
        CHECK(static_cast<int>(b.size()) <= p.comb_dim);
        CHECK(std::includes(sub.begin(), sub.end(), b.begin(), b.end()));
        const double gb = minimax(p, b).value;
        CHECK(gb == doctest::Approx(minimax(p, sub).value).epsilon(1e-6));
        for (size_t i = 0; i < b.size(); ++i) {
            std::vector<int> drop;
            for (size_t j = 0; j < b.size(); ++j)
                if (j != i) drop.push_back(b[j]);
            CHECK(minimax(p, drop).value < gb - 1e-9);
        }
    }
    CHECK(checked >= 10);
}

TEST_CASE("every basis blocks every maximum consensus set") {
    // A basis drawn from an infeasible working set must contain at least one
    // point outside any maximum consensus set, else that set could not be fit.
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int t = 0; t < 30; ++t) {
        auto p = oracle::random_instance_1d(rng, 8, 3, 0.05);
        std::vector<int> all(8);
        for (int i = 0; i < 8; ++i) all[i] = i;
        if (feasibility(p, all) == 0) continue;
        ++checked;
        auto b = extract_basis(p, all);
        for (const auto& s : oracle::all_max_consensus_1d(p)) {
            bool escapes = false;
            for (int u : b)
                if (!std::binary_search(s.begin(), s.end(), u)) escapes = true;
            CHECK(escapes);
        }
    }
    CHECK(checked >= 15);
}
