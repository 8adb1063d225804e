#include "maxcon/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace maxcon {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

void fmt(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const std::string& where) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(where + ": bad number '" + s + "'");
    }
}

// Solve the square system M x = rhs by Gaussian elimination with partial
// pivoting; false when the pivot collapses (degenerate sample).
bool solve_square(std::vector<double> M, std::vector<double> rhs, int d, std::vector<double>& x) {
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(M[r * d + col]) > std::abs(M[piv * d + col])) piv = r;
        if (std::abs(M[piv * d + col]) < 1e-12) return false;
        if (piv != col) {
            for (int j = 0; j < d; ++j) std::swap(M[col * d + j], M[piv * d + j]);
            std::swap(rhs[col], rhs[piv]);
        }
        for (int r = col + 1; r < d; ++r) {
            const double f = M[r * d + col] / M[col * d + col];
            if (f == 0.0) continue;
            for (int j = col; j < d; ++j) M[r * d + j] -= f * M[col * d + j];
            rhs[r] -= f * rhs[col];
        }
    }
    x.assign(d, 0.0);
    for (int r = d - 1; r >= 0; --r) {
        double acc = rhs[r];
        for (int j = r + 1; j < d; ++j) acc -= M[r * d + j] * x[j];
        x[r] = acc / M[r * d + r];
    }
    return true;
}

}  // namespace

SyntheticInstance generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n_points < 1) throw std::invalid_argument("generate_synthetic: n_points must be >= 1");
    if (spec.outlier_ratio < 0.0 || spec.outlier_ratio > 1.0)
        throw std::invalid_argument("generate_synthetic: outlier_ratio outside [0, 1]");
    if (spec.sigma_in < 0.0 || spec.sigma_out < 0.0)
        throw std::invalid_argument("generate_synthetic: negative noise scale");
    if (!(spec.epsilon > 0.0)) throw std::invalid_argument("generate_synthetic: epsilon must be > 0");

    const int n = spec.n_points;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    SyntheticInstance inst;
    inst.model = {uni(rng)};
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = uni(rng);

    const int k = static_cast<int>(std::floor(spec.outlier_ratio * n));
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng() % static_cast<uint64_t>(i + 1));
        std::swap(idx[i], idx[j]);
    }
    inst.inlier_mask.assign(n, 1);
    for (int i = 0; i < k; ++i) inst.inlier_mask[idx[i]] = 0;

    FittingProblem& p = inst.problem;
    p.dim = 1;
    p.comb_dim = 2;
    p.epsilon = spec.epsilon;
    p.coeffs = a;
    p.offsets.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double sigma = inst.inlier_mask[i] ? spec.sigma_in : spec.sigma_out;
        p.offsets[i] = clamp01(a[i] * inst.model[0] + sigma * gauss(rng));
    }
    p.validate();
    return inst;
}

FittingProblem linearize_fundamental(const CorrespondenceSet& c, double epsilon) {
    const int n = static_cast<int>(c.pairs.size());
    if (n < 8) throw std::invalid_argument("linearize_fundamental: need at least 8 pairs");
    if (!(epsilon > 0.0)) throw std::invalid_argument("linearize_fundamental: epsilon must be > 0");

    // Per-image similarity: centroid to the origin, mean norm to sqrt(2).
    auto normalizer = [&](int off, const char* side) {
        double cu = 0.0, cv = 0.0;
        for (const auto& pr : c.pairs) {
            cu += pr[off];
            cv += pr[off + 1];
        }
        cu /= n;
        cv /= n;
        double md = 0.0;
        for (const auto& pr : c.pairs) md += std::hypot(pr[off] - cu, pr[off + 1] - cv);
        md /= n;
        if (md < 1e-12)
            throw std::invalid_argument(std::string("linearize_fundamental: degenerate ") + side +
                                        " image (coincident points)");
        return std::array<double, 3>{cu, cv, std::sqrt(2.0) / md};
    };
    const auto t1 = normalizer(0, "first");
    const auto t2 = normalizer(2, "second");

    FittingProblem p;
    p.dim = 8;
    p.comb_dim = 9;
    p.epsilon = epsilon;
    p.coeffs.reserve(static_cast<size_t>(n) * 8);
    p.offsets.assign(n, -1.0);
    for (const auto& pr : c.pairs) {
        const double u = (pr[0] - t1[0]) * t1[2];
        const double v = (pr[1] - t1[1]) * t1[2];
        const double up = (pr[2] - t2[0]) * t2[2];
        const double vp = (pr[3] - t2[1]) * t2[2];
        const double row[8] = {up * u, up * v, up, vp * u, vp * v, vp, u, v};
        p.coeffs.insert(p.coeffs.end(), row, row + 8);
    }
    p.validate();
    return p;
}

RansacResult ransac_baseline(const FittingProblem& p, int iterations, uint64_t seed) {
    p.validate();
    const int n = p.n_points();
    const int d = p.dim;
    if (n < d) throw std::invalid_argument("ransac_baseline: fewer points than model dimension");
    if (iterations < 1) throw std::invalid_argument("ransac_baseline: iterations must be >= 1");

    RansacResult best;
    int best_count = -1;
    std::vector<int> pool(n);
    std::vector<double> M(static_cast<size_t>(d) * d), rhs(d), x;

    for (int it = 0; it < iterations; ++it) {
        std::mt19937_64 rng(seed + static_cast<uint64_t>(it));
        for (int i = 0; i < n; ++i) pool[i] = i;
        for (int k = 0; k < d; ++k) {  // partial Fisher-Yates draw of d indices
            const int j = k + static_cast<int>(rng() % static_cast<uint64_t>(n - k));
            std::swap(pool[k], pool[j]);
        }
        for (int k = 0; k < d; ++k) {
            const int i = pool[k];
            for (int j = 0; j < d; ++j) M[k * d + j] = p.coeffs[static_cast<size_t>(i) * d + j];
            rhs[k] = p.offsets[i];
        }
        if (!solve_square(M, rhs, d, x)) continue;

        std::vector<int> inliers;
        for (int i = 0; i < n; ++i)
            if (p.residual(i, x) <= p.epsilon) inliers.push_back(i);
        if (static_cast<int>(inliers.size()) > best_count) {
            best_count = static_cast<int>(inliers.size());
            best.consensus = std::move(inliers);
            best.model = x;
        }
    }
    return best;
}

void write_problem_csv(const std::string& csv_path, const std::string& json_path,
                       const FittingProblem& p) {
    p.validate();
    std::ofstream csv(csv_path);
    if (!csv) throw std::invalid_argument("cannot open for writing: " + csv_path);
    for (int j = 0; j < p.dim; ++j) csv << 'a' << (j + 1) << ',';
    csv << "b\n";
    for (int i = 0; i < p.n_points(); ++i) {
        for (int j = 0; j < p.dim; ++j) {
            fmt(csv, p.coeffs[static_cast<size_t>(i) * p.dim + j]);
            csv << ',';
        }
        fmt(csv, p.offsets[i]);
        csv << '\n';
    }
    nlohmann::json meta;
    meta["epsilon"] = p.epsilon;
    meta["dim"] = p.dim;
    meta["comb_dim"] = p.comb_dim;
    std::ofstream js(json_path);
    if (!js) throw std::invalid_argument("cannot open for writing: " + json_path);
    js << meta.dump(2) << '\n';
}

FittingProblem read_problem_csv(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw std::invalid_argument("cannot open: " + json_path);
    nlohmann::json meta;
    try {
        js >> meta;
    } catch (const std::exception& e) {
        throw std::invalid_argument(json_path + ": bad JSON (" + e.what() + ")");
    }
    FittingProblem p;
    try {
        p.epsilon = meta.at("epsilon").get<double>();
        p.dim = meta.at("dim").get<int>();
        p.comb_dim = meta.at("comb_dim").get<int>();
    } catch (const std::exception& e) {
        throw std::invalid_argument(json_path + ": missing field (" + e.what() + ")");
    }

    std::ifstream csv(csv_path);
    if (!csv) throw std::invalid_argument("cannot open: " + csv_path);
    std::string line;
    if (!std::getline(csv, line)) throw std::invalid_argument(csv_path + ": empty file");
    const auto header = split_csv_line(line);
    if (static_cast<int>(header.size()) != p.dim + 1 || header.back() != "b")
        throw std::invalid_argument(csv_path + ": header does not match dim " + std::to_string(p.dim));
    int row = 1;
    while (std::getline(csv, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != p.dim + 1)
            throw std::invalid_argument(csv_path + ": row " + std::to_string(row) + " has wrong arity");
        for (int j = 0; j < p.dim; ++j)
            p.coeffs.push_back(parse_double(cells[j], csv_path));
        p.offsets.push_back(parse_double(cells.back(), csv_path));
    }
    if (p.offsets.empty()) throw std::invalid_argument(csv_path + ": no data rows");
    p.validate();
    return p;
}

void write_truth_json(const std::string& path, const SyntheticInstance& inst) {
    nlohmann::json j;
    j["model"] = inst.model;
    j["inlier_mask"] = std::vector<int>(inst.inlier_mask.begin(), inst.inlier_mask.end());
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open for writing: " + path);
    os << j.dump(2) << '\n';
}

void write_correspondences_csv(const std::string& path, const CorrespondenceSet& c) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open for writing: " + path);
    os << "u1,v1,u2,v2\n";
    for (const auto& pr : c.pairs) {
        for (int k = 0; k < 4; ++k) {
            if (k) os << ',';
            fmt(os, pr[k]);
        }
        os << '\n';
    }
}

CorrespondenceSet read_correspondences_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument(path + ": empty file");
    {
        const auto header = split_csv_line(line);
        if (header != std::vector<std::string>{"u1", "v1", "u2", "v2"})
            throw std::invalid_argument(path + ": expected header u1,v1,u2,v2");
    }
    CorrespondenceSet c;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4)
            throw std::invalid_argument(path + ": row " + std::to_string(row) + " has wrong arity");
        std::array<double, 4> pr{};
        for (int k = 0; k < 4; ++k) pr[k] = parse_double(cells[k], path);
        c.pairs.push_back(pr);
    }
    if (c.pairs.empty()) throw std::invalid_argument(path + ": no data rows");
    return c;
}

}  // namespace maxcon
