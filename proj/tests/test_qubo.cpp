#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "maxcon/qubo.hpp"
#include "oracles.hpp"

using maxcon::build_qubo;
using maxcon::decode;
using maxcon::HyperedgeSet;
using maxcon::IsingModel;
using maxcon::ising_energy;
using maxcon::make_edge;
using maxcon::QuboProblem;
using maxcon::qubo_energy;
using maxcon::read_qubo;
using maxcon::to_ising;
using maxcon::write_qubo;

namespace {

HyperedgeSet edges_from(int n, int max_size, const std::vector<std::vector<int>>& lists) {
    HyperedgeSet h;
    h.n_vertices = n;
    h.max_edge_size = max_size;
    for (const auto& e : lists) h.add(make_edge(e, n, max_size));
    return h;
}

std::vector<uint8_t> bits_of(uint64_t k, int n) {
    std::vector<uint8_t> v(n);
    for (int i = 0; i < n; ++i) v[i] = (k >> i) & 1ull;
    return v;
}

HyperedgeSet random_edges(std::mt19937_64& rng, int n, int max_size, int m) {
    HyperedgeSet h;
    h.n_vertices = n;
    h.max_edge_size = max_size;
    while (h.size() < m) {
        std::vector<int> e;
        const int sz = 1 + static_cast<int>(rng() % max_size);
        while (static_cast<int>(e.size()) < sz) {
            const int u = static_cast<int>(rng() % n);
            bool dup = false;
            for (int w : e) dup |= w == u;
            if (!dup) e.push_back(u);
        }
        h.add(make_edge(e, n, max_size));
    }
    return h;
}

}  // namespace

TEST_CASE("variable layout counts cover bits plus slack blocks") {
    auto pin = edges_from(12, 3,
                          {{0, 4, 5}, {1, 6, 7}, {2, 8, 9}, {3, 10, 11}, {0, 1, 2}, {1, 2, 3}});
    auto q = build_qubo(pin, 2.0);
    CHECK(q.n == 24);  // 12 + (3-1) * 6
    CHECK(q.n_z == 12);
    CHECK(q.slack_width == 2);
    CHECK(q.slack_begin(0) == 12);
    CHECK(q.slack_begin(5) == 22);
    REQUIRE(q.constraints.size() == 6);
    CHECK(q.constraints[0] == std::vector<int>{0, 4, 5});

    auto pair = build_qubo(edges_from(2, 2, {{0, 1}}), 1.0);
    CHECK(pair.n == 3);
    CHECK(pair.slack_width == 1);

    auto unit = build_qubo(edges_from(3, 1, {{1}}), 4.0);
    CHECK(unit.n == 3);  // slack width zero: variables are the cover bits only
    CHECK(unit.slack_width == 0);
}

TEST_CASE("lambda must be positive and finite") {
    auto h = edges_from(2, 2, {{0, 1}});
    CHECK_THROWS_AS((void)build_qubo(h, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_qubo(h, -1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)build_qubo(h, std::nan("")), std::invalid_argument);
}

TEST_CASE("hand-expanded single-constraint matrix") {
    // |z|_1 + L(z0 + z1 - t - 1)^2 with binary identities expands to
    // q00 = q11 = 1-L, q22 = 3L, q01 = 2L, q02 = q12 = -2L, offset L.
    const double L = 2.0;
    auto q = build_qubo(edges_from(2, 2, {{0, 1}}), L);
    CHECK(q.at(0, 0) == doctest::Approx(1.0 - L));
    CHECK(q.at(1, 1) == doctest::Approx(1.0 - L));
    CHECK(q.at(2, 2) == doctest::Approx(3.0 * L));
    CHECK(q.at(0, 1) == doctest::Approx(2.0 * L));
    CHECK(q.at(0, 2) == doctest::Approx(-2.0 * L));
    CHECK(q.at(1, 2) == doctest::Approx(-2.0 * L));
    CHECK(q.offset == doctest::Approx(L));
    CHECK(q.at(1, 0) == 0.0);
    CHECK(q.at(2, 0) == 0.0);
    CHECK(q.at(2, 1) == 0.0);
}

TEST_CASE("single-constraint energies match the closed forms") {
    const double L = 5.0;
    auto q = build_qubo(edges_from(2, 2, {{0, 1}}), L);
    auto E = [&](int z0, int z1, int t) {
        const double c = z0 + z1 - t - 1;
        return z0 + z1 + L * c * c;
    };
    for (uint64_t k = 0; k < 8; ++k) {
        auto v = bits_of(k, 3);
        CHECK(qubo_energy(q, v) == doctest::Approx(E(v[0], v[1], v[2])).epsilon(1e-12));
    }
    // Minimum value is the cover number 1, attained violation-free.
    double best = 1e300;
    for (uint64_t k = 0; k < 8; ++k) best = std::min(best, qubo_energy(q, bits_of(k, 3)));
    CHECK(best == doctest::Approx(1.0));
    CHECK(decode(q, {1, 0, 0}).violations == 0);
    CHECK(qubo_energy(q, {1, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("energy rejects wrong assignment length") {
    auto q = build_qubo(edges_from(2, 2, {{0, 1}}), 1.0);
    CHECK_THROWS_AS((void)qubo_energy(q, {1, 0}), std::invalid_argument);
}

TEST_CASE("folded energy equals both reference constructions") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 15; ++t) {
        const int n = 4 + static_cast<int>(rng() % 5);
        const int delta = 2 + static_cast<int>(rng() % 2);
        auto h = random_edges(rng, n, delta, 1 + static_cast<int>(rng() % 4));
        const double lambda = oracle::urand(rng, 0.1, 6.0);
        auto q = build_qubo(h, lambda);
        const int sw = delta - 1;
        for (int rep = 0; rep < 60; ++rep) {
            std::vector<uint8_t> v(q.n);
            for (auto& b : v) b = rng() & 1;
            const double got = qubo_energy(q, v);
            CHECK(got ==
                  doctest::Approx(oracle::penalty_energy(h, sw, lambda, v)).epsilon(1e-10));
            CHECK(got == doctest::Approx(oracle::lifted_energy(h, sw, lambda, v)).epsilon(1e-10));
        }
    }
}

TEST_CASE("decoding splits cover bits and counts violated constraints") {
    auto q = build_qubo(edges_from(2, 2, {{0, 1}}), 1.0);
    auto d = decode(q, {0, 0, 0});
    CHECK(d.z.bits == std::vector<uint8_t>{0, 0});
    CHECK(d.violations == 1);
    CHECK(decode(q, {1, 1, 1}).violations == 0);  // 2 - 1 slack = 1
    CHECK(decode(q, {1, 1, 0}).violations == 1);  // over-covered without slack
    CHECK(decode(q, {0, 1, 1}).violations == 1);
    CHECK_THROWS_AS((void)decode(q, {1, 0}), std::invalid_argument);
}

TEST_CASE("one-variable spin model halves the diagonal") {
    QuboProblem q;
    q.n = 1;
    q.n_z = 1;
    q.q = {1.0};
    auto m = to_ising(q);
    REQUIRE(m.n == 1);
    CHECK(m.h[0] == doctest::Approx(0.5));
    CHECK(m.couplings.empty());
    CHECK(m.offset == doctest::Approx(0.5));
    CHECK(m.scale == doctest::Approx(1.0));  // max(|0.5|/2, 1)
    CHECK(m.scale * (ising_energy(m, {-1}) + m.offset) == doctest::Approx(0.0));
    CHECK(m.scale * (ising_energy(m, {+1}) + m.offset) == doctest::Approx(1.0));
}

TEST_CASE("spin conversion is an exact reparameterization") {
    std::mt19937_64 rng(37);
    for (int t = 0; t < 20; ++t) {
        const int n = 2 + static_cast<int>(rng() % 7);
        QuboProblem q;
        q.n = n;
        q.n_z = n;
        q.offset = oracle::urand(rng, -2.0, 2.0);
        q.q.assign(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                if (i == j || (rng() % 3) != 0)
                    q.q[static_cast<size_t>(i) * n + j] = oracle::urand(rng, -8.0, 8.0);
        auto m = to_ising(q);
        for (double hv : m.h) CHECK(std::abs(hv) <= 2.0 + 1e-12);
        for (const auto& [i, j, jv] : m.couplings) {
            CHECK(i < j);
            CHECK(std::abs(jv) <= 1.0 + 1e-12);
        }
        for (uint64_t k = 0; k < (1ull << n); ++k) {
            auto v = bits_of(k, n);
            std::vector<int> s(n);
            for (int i = 0; i < n; ++i) s[i] = v[i] ? 1 : -1;
            CHECK(qubo_energy(q, v) ==
                  doctest::Approx(m.scale * (ising_energy(m, s) + m.offset)).epsilon(1e-10));
        }
    }
}

TEST_CASE("binary and spin minima coincide") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 10; ++t) {
        auto h = random_edges(rng, 4 + static_cast<int>(rng() % 3), 2, 2);
        auto q = build_qubo(h, oracle::urand(rng, 0.5, 4.0));
        auto m = to_ising(q);
        double qmin = 1e300, smin = 1e300;
        for (uint64_t k = 0; k < (1ull << q.n); ++k) {
            auto v = bits_of(k, q.n);
            qmin = std::min(qmin, qubo_energy(q, v));
            std::vector<int> s(q.n);
            for (int i = 0; i < q.n; ++i) s[i] = v[i] ? 1 : -1;
            smin = std::min(smin, m.scale * (ising_energy(m, s) + m.offset));
        }
        CHECK(qmin == doctest::Approx(smin).epsilon(1e-9));
    }
}

TEST_CASE("matrix text round-trip preserves every entry") {
    auto pin = edges_from(12, 3,
                          {{0, 4, 5}, {1, 6, 7}, {2, 8, 9}, {3, 10, 11}, {0, 1, 2}, {1, 2, 3}});
    auto q = build_qubo(pin, 2.5);
    std::stringstream ss;
    write_qubo(ss, q);
    auto r = read_qubo(ss);
    REQUIRE(r.n == q.n);
    CHECK(r.offset == q.offset);
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) CHECK(r.at(i, j) == q.at(i, j));

    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<uint8_t> v(q.n);
        for (auto& b : v) b = rng() & 1;
        CHECK(qubo_energy(r, v) == qubo_energy(q, v));
    }
}

TEST_CASE("malformed matrix text is rejected") {
    auto bad = [](const char* text) {
        std::stringstream ss(text);
        CHECK_THROWS_AS((void)read_qubo(ss), std::invalid_argument);
    };
    bad("");
    bad("not a header\n");
    bad("2 1\n0 5 1.0\n# offset 0\n");   // column out of range
    bad("2 2\n0 0 1.0\n# offset 0\n");   // fewer triplets than declared
    bad("2 1\n1 0 1.0\n# offset 0\n");   // lower-triangular entry
    bad("-1 0\n# offset 0\n");
}
