#include "maxcon/qubo.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace maxcon {

QuboProblem build_qubo(const HyperedgeSet& h, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("build_qubo: lambda must be positive and finite");
    if (h.max_edge_size < 1) throw std::invalid_argument("build_qubo: max edge size must be >= 1");

    QuboProblem q;
    q.n_z = h.n_vertices;
    q.slack_width = h.max_edge_size - 1;
    q.lambda = lambda;
    const int m_count = h.size();
    q.n = q.n_z + q.slack_width * m_count;
    for (const auto& e : h.edges) q.constraints.push_back(e.v);

    // Lifted symmetric form over [v; 1]: unit weights on the cover bits plus
    // lambda * H'H where row m of H has +1 on the edge's cover bits, -1 on
    // its own slack block, and -1 in the constant column.
    const int nf = q.n + 1;
    std::vector<double> full(static_cast<size_t>(nf) * nf, 0.0);
    auto fat = [&](int i, int j) -> double& { return full[static_cast<size_t>(i) * nf + j]; };

    for (int i = 0; i < q.n_z; ++i) fat(i, i) += 1.0;

    std::vector<int> support;
    std::vector<double> coeff;
    for (int m = 0; m < m_count; ++m) {
        support.clear();
        coeff.clear();
        for (int u : h.edges[m].v) {
            support.push_back(u);
            coeff.push_back(1.0);
        }
        for (int k = 0; k < q.slack_width; ++k) {
            support.push_back(q.slack_begin(m) + k);
            coeff.push_back(-1.0);
        }
        support.push_back(q.n);  // constant column
        coeff.push_back(-1.0);
        for (size_t a = 0; a < support.size(); ++a)
            for (size_t b = 0; b < support.size(); ++b)
                fat(support[a], support[b]) += lambda * coeff[a] * coeff[b];
    }

    // Upper-triangularize, then fold the constant row/column into the
    // diagonal and the scalar corner into the offset.
    for (int i = 0; i < nf; ++i)
        for (int j = i + 1; j < nf; ++j) fat(i, j) += fat(j, i);
    q.q.assign(static_cast<size_t>(q.n) * q.n, 0.0);
    for (int i = 0; i < q.n; ++i) {
        for (int j = i; j < q.n; ++j)
            q.q[static_cast<size_t>(i) * q.n + j] = fat(i, j);
        q.q[static_cast<size_t>(i) * q.n + i] += fat(i, q.n);
    }
    q.offset = fat(q.n, q.n);
    return q;
}

double qubo_energy(const QuboProblem& q, const std::vector<uint8_t>& v) {
    if (static_cast<int>(v.size()) != q.n)
        throw std::invalid_argument("qubo_energy: assignment length mismatch");
    double e = q.offset;
    for (int i = 0; i < q.n; ++i) {
        if (!v[i]) continue;
        const double* row = q.q.data() + static_cast<size_t>(i) * q.n;
        e += row[i];
        for (int j = i + 1; j < q.n; ++j)
            if (v[j]) e += row[j];
    }
    return e;
}

Decoded decode(const QuboProblem& q, const std::vector<uint8_t>& v) {
    if (static_cast<int>(v.size()) != q.n)
        throw std::invalid_argument("decode: assignment length mismatch");
    Decoded out;
    out.z.bits.assign(v.begin(), v.begin() + q.n_z);
    for (size_t m = 0; m < q.constraints.size(); ++m) {
        int lhs = 0;
        for (int u : q.constraints[m]) lhs += v[u] ? 1 : 0;
        const int base = q.slack_begin(static_cast<int>(m));
        for (int k = 0; k < q.slack_width; ++k) lhs -= v[base + k] ? 1 : 0;
        if (lhs != 1) ++out.violations;
    }
    return out;
}

IsingModel to_ising(const QuboProblem& q) {
    // Substituting v = (1+s)/2 into v'Qv gives
    //   h_i = q_ii/2 + (sum of couplings incident to i)/4,
    //   J_ij = q_ij/4,  constant = sum q_ii/2 + sum_{i<j} q_ij/4,
    // so qubo_energy(q, v) == (offset + constant) + ising_energy(s) exactly.
    IsingModel m;
    m.n = q.n;
    m.h.assign(q.n, 0.0);
    double c = 0.0;
    for (int i = 0; i < q.n; ++i) {
        const double* row = q.q.data() + static_cast<size_t>(i) * q.n;
        m.h[i] += row[i] / 2.0;
        c += row[i] / 2.0;
        for (int j = i + 1; j < q.n; ++j) {
            const double qij = row[j];
            if (qij == 0.0) continue;
            m.h[i] += qij / 4.0;
            m.h[j] += qij / 4.0;
            c += qij / 4.0;
            m.couplings.emplace_back(i, j, qij / 4.0);
        }
    }
    m.offset = q.offset + c;
    double max_h = 0.0, max_j = 0.0;
    for (double v : m.h) max_h = std::max(max_h, std::abs(v));
    for (const auto& [i, j, v] : m.couplings) max_j = std::max(max_j, std::abs(v));
    m.scale = std::max({max_h / 2.0, max_j, 1.0});
    for (double& v : m.h) v /= m.scale;
    for (auto& [i, j, v] : m.couplings) v /= m.scale;
    m.offset /= m.scale;
    return m;
}

double ising_energy(const IsingModel& m, const std::vector<int>& s) {
    if (static_cast<int>(s.size()) != m.n)
        throw std::invalid_argument("ising_energy: spin length mismatch");
    double e = 0.0;
    for (int i = 0; i < m.n; ++i) e += m.h[i] * s[i];
    for (const auto& [i, j, v] : m.couplings) e += v * s[i] * s[j];
    return e;
}

void write_qubo(std::ostream& os, const QuboProblem& q) {
    int nnz = 0;
    for (int i = 0; i < q.n; ++i)
        for (int j = i; j < q.n; ++j)
            if (q.at(i, j) != 0.0) ++nnz;
    os << q.n << ' ' << nnz << '\n';
    char buf[64];
    for (int i = 0; i < q.n; ++i) {
        for (int j = i; j < q.n; ++j) {
            const double v = q.at(i, j);
            if (v == 0.0) continue;
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << i << ' ' << j << ' ' << buf << '\n';
        }
    }
    std::snprintf(buf, sizeof buf, "%.17g", q.offset);
    os << "# offset " << buf << '\n';
}

QuboProblem read_qubo(std::istream& is) {
    QuboProblem q;
    int nnz = 0;
    if (!(is >> q.n >> nnz) || q.n < 0 || nnz < 0)
        throw std::invalid_argument("qubo text: bad header");
    q.q.assign(static_cast<size_t>(q.n) * q.n, 0.0);
    q.n_z = q.n;
    for (int k = 0; k < nnz; ++k) {
        int i = 0, j = 0;
        double v = 0.0;
        if (!(is >> i >> j >> v) || i < 0 || j < i || j >= q.n)
            throw std::invalid_argument("qubo text: bad triplet");
        q.q[static_cast<size_t>(i) * q.n + j] = v;
    }
    std::string line;
    std::getline(is, line);  // finish the triplet line
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string hash, word;
        if (ls >> hash >> word && hash == "#" && word == "offset") {
            if (!(ls >> q.offset)) throw std::invalid_argument("qubo text: bad offset line");
            return q;
        }
    }
    throw std::invalid_argument("qubo text: missing offset line");
}

}  // namespace maxcon
