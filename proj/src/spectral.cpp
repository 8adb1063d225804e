#include "maxcon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "maxcon/parallel.hpp"

namespace maxcon {

namespace {

constexpr double kOffTol = 1e-10;  // relative off-diagonal norm target

// Reduce a symmetric matrix (destroyed in place) to tridiagonal d/e by
// Householder reflections, eigenvalues only.
void householder_tridiag(std::vector<double>& a, int m, std::vector<double>& d,
                         std::vector<double>& e) {
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * m + j]; };
    d.assign(m, 0.0);
    e.assign(m, 0.0);
    for (int i = m - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (int k = j + 1; k <= l; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = at(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (int k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
    }
    e[0] = 0.0;
    for (int i = 0; i < m; ++i) d[i] = at(i, i);
}

// Implicit-shift QL on a tridiagonal matrix; d holds the diagonal, e the
// subdiagonal in e[1..m-1]. Eigenvalues land in d.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, int m) {
    for (int i = 1; i < m; ++i) e[i - 1] = e[i];
    e[m - 1] = 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    // Deflation needs an absolute floor as well: around a zero diagonal the
    // purely relative test can never fire even when the off-diagonal is
    // negligible against the matrix as a whole.
    double scale = 0.0;
    for (int i = 0; i < m; ++i) scale = std::max(scale, std::abs(d[i]) + std::abs(e[i]));
    const double tiny = eps * scale;
    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int mm;
        do {
            for (mm = l; mm < m - 1; ++mm) {
                const double dd = std::abs(d[mm]) + std::abs(d[mm + 1]);
                if (std::abs(e[mm]) <= eps * dd + tiny) break;
            }
            if (mm != l) {
                if (iter++ == 50) throw std::runtime_error("tridiagonal QL failed to converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[mm] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = mm - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[mm] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[mm] = 0.0;
            }
        } while (mm != l);
    }
}

}  // namespace

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int m) {
    if (m <= 0) throw std::invalid_argument("jacobi_eigenvalues: empty matrix");
    if (a.size() != static_cast<size_t>(m) * m)
        throw std::invalid_argument("jacobi_eigenvalues: size mismatch");
    auto at = [&](int i, int j) -> double& { return a[static_cast<size_t>(i) * m + j]; };

    double norm = 0.0;
    for (double x : a) norm += x * x;
    norm = std::sqrt(norm);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += 2.0 * at(p, q) * at(p, q);
        off = std::sqrt(off);
        if (off <= kOffTol * std::max(norm, 1e-300)) {
            std::vector<double> ev(m);
            for (int i = 0; i < m; ++i) ev[i] = at(i, i);
            std::sort(ev.begin(), ev.end());
            return ev;
        }
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double tau = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = at(p, p), aqq = at(q, q);
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                for (int k = 0; k < m; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = c * akp - s * akq;
                    at(p, k) = at(k, p);
                    at(k, q) = s * akp + c * akq;
                    at(q, k) = at(k, q);
                }
            }
        }
    }
    throw std::runtime_error("jacobi_eigenvalues: sweep cap exceeded");
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int m) {
    if (m <= 0) throw std::invalid_argument("symmetric_eigenvalues: empty matrix");
    if (a.size() != static_cast<size_t>(m) * m)
        throw std::invalid_argument("symmetric_eigenvalues: size mismatch");
    if (m == 1) return {a[0]};
    std::vector<double> d, e;
    householder_tridiag(a, m, d, e);
    tridiag_ql(d, e, m);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> hamiltonian(const IsingModel& m, double s) {
    if (m.n < 1) throw std::invalid_argument("hamiltonian: empty model");
    if (m.n > 12) throw std::invalid_argument("hamiltonian: instance too large (n > 12)");
    if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("hamiltonian: s outside [0, 1]");

    const int n = m.n;
    const size_t dim = 1ull << n;
    std::vector<double> H(dim * dim, 0.0);

    for (size_t k = 0; k < dim; ++k) {
        double dz = 0.0;
        for (int i = 0; i < n; ++i) {
            const double si = (k >> (n - 1 - i)) & 1ull ? -1.0 : 1.0;
            dz += m.h[i] * si;
        }
        for (const auto& [i, j, v] : m.couplings) {
            const double si = (k >> (n - 1 - i)) & 1ull ? -1.0 : 1.0;
            const double sj = (k >> (n - 1 - j)) & 1ull ? -1.0 : 1.0;
            dz += v * si * sj;
        }
        H[k * dim + k] = s * dz;
        for (int i = 0; i < n; ++i) {
            const size_t kk = k ^ (1ull << (n - 1 - i));
            H[k * dim + kk] += (1.0 - s);
        }
    }
    return H;
}

GapProfile spectral_gap(const IsingModel& m, int grid_points) {
    if (grid_points < 3) throw std::invalid_argument("spectral_gap: need at least 3 grid points");
    if (m.n < 1) throw std::invalid_argument("spectral_gap: empty model");
    if (m.n > 12) throw std::invalid_argument("spectral_gap: instance too large (n > 12)");

    GapProfile prof;
    prof.s.resize(grid_points);
    prof.gap.resize(grid_points);
    std::vector<double> e0(grid_points, 0.0);

    const int dim = 1 << m.n;
    // Each worker holds one dense dim^2 matrix; cap the fan-out once those
    // buffers get large.
    const int threads = dim <= 1024 ? 0 : 2;
    parallel_for(grid_points, threads, [&](int j) {
        const double s = static_cast<double>(j) / (grid_points - 1);
        std::vector<double> H = hamiltonian(m, s);
        std::vector<double> ev =
            dim <= 64 ? jacobi_eigenvalues(std::move(H), dim)
                      : symmetric_eigenvalues(std::move(H), dim);
        prof.s[j] = s;
        prof.gap[j] = ev[1] - ev[0];
        e0[j] = ev[0];
    });

    int arg = 0;
    for (int j = 1; j < grid_points; ++j)
        if (prof.gap[j] < prof.gap[arg]) arg = j;
    prof.min_gap = prof.gap[arg];
    prof.argmin_s = prof.s[arg];
    prof.degenerate = prof.min_gap <= 1e-9 * std::max(1.0, std::abs(e0[arg]));
    return prof;
}

void write_gap_csv(std::ostream& os, const GapProfile& p) {
    os << "s,gap\n";
    char buf[64];
    for (size_t j = 0; j < p.s.size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", p.s[j]);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", p.gap[j]);
        os << buf << '\n';
    }
}

void write_lambda_gap_csv(std::ostream& os, const std::vector<LambdaGapRow>& rows) {
    os << "lambda,min_gap\n";
    char buf[64];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.lambda);
        os << buf << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.min_gap);
        os << buf << '\n';
    }
}

std::vector<LambdaGapRow> read_lambda_gap_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "lambda,min_gap")
        throw std::invalid_argument("gap sweep: bad header");
    std::vector<LambdaGapRow> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        LambdaGapRow r;
        char c = 0;
        if (!(ls >> r.lambda >> c >> r.min_gap) || c != ',')
            throw std::invalid_argument("gap sweep: bad row");
        out.push_back(r);
    }
    return out;
}

}  // namespace maxcon
