// Command-line front end: generate synthetic data, run the covering solver or
// the sampling baseline, and export the compiled problems for inspection.
// Every subcommand writes a manifest.json beside its outputs; rerunning with
// --config <manifest> replays the run (explicit flags still override).

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "maxcon/anneal.hpp"
#include "maxcon/data_io.hpp"
#include "maxcon/driver.hpp"
#include "maxcon/hypergraph.hpp"
#include "maxcon/qubo.hpp"
#include "maxcon/spectral.hpp"
#include "maxcon/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------- option records (also the manifest payload) ----------

struct GenerateOpts {
    int n = 20;
    double ratio = 0.2;
    double sigma_in = 0.1;
    double sigma_out = 1.5;
    double epsilon = 0.1;
    uint64_t seed = 1;
};

struct InputOpts {
    std::string input;
    std::string sidecar;   // defaults to the input path with a .json extension
    double epsilon = 0.0;  // > 0 overrides the sidecar (or the 0.03 pair default)
};

struct SolveOpts {
    InputOpts in;
    int iterations = 100;
    double lambda = 1.0;
    double lambda_floor = 0.01;
    double decay_factor = 2.0;
    int decay_period = 50;
    std::string variant = "full";  // or "early"
    std::string backend = "sa";    // or "exact"
    uint64_t seed = 1;
    int restarts = 4;
    int sweeps = 0;
    int threads = 0;
};

struct RansacOpts {
    InputOpts in;
    int iterations = 1000;
    uint64_t seed = 1;
};

struct QuboOpts {
    InputOpts in;
    double lambda = 1.0;
};

struct GapOpts {
    InputOpts in;
    double lambda_min = 0.1;
    double lambda_max = 100.0;
    int count = 13;
    int grid = 101;
};

json to_json(const GenerateOpts& o) {
    return json{{"n", o.n},           {"ratio", o.ratio},     {"sigma-in", o.sigma_in},
                {"sigma-out", o.sigma_out}, {"epsilon", o.epsilon}, {"seed", o.seed}};
}

void input_json(json& j, const InputOpts& o) {
    j["input"] = o.input;
    j["sidecar"] = o.sidecar;
    j["epsilon"] = o.epsilon;
}

json to_json(const SolveOpts& o) {
    json j;
    input_json(j, o.in);
    j["iterations"] = o.iterations;
    j["lambda"] = o.lambda;
    j["lambda-floor"] = o.lambda_floor;
    j["decay-factor"] = o.decay_factor;
    j["decay-period"] = o.decay_period;
    j["variant"] = o.variant;
    j["backend"] = o.backend;
    j["seed"] = o.seed;
    j["restarts"] = o.restarts;
    j["sweeps"] = o.sweeps;
    j["threads"] = o.threads;
    return j;
}

json to_json(const RansacOpts& o) {
    json j;
    input_json(j, o.in);
    j["iterations"] = o.iterations;
    j["seed"] = o.seed;
    return j;
}

json to_json(const QuboOpts& o) {
    json j;
    input_json(j, o.in);
    j["lambda"] = o.lambda;
    return j;
}

json to_json(const GapOpts& o) {
    json j;
    input_json(j, o.in);
    j["lambda-min"] = o.lambda_min;
    j["lambda-max"] = o.lambda_max;
    j["count"] = o.count;
    j["grid"] = o.grid;
    return j;
}

// ---------- plumbing ----------

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::invalid_argument("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

void write_manifest(const fs::path& dir, const std::string& command, const json& options) {
    json m{{"command", command}, {"options", options}, {"version", maxcon::kVersion}};
    write_text(dir / "manifest.json", m.dump(2) + "\n");
}

fs::path prepare_out(const std::string& out) {
    fs::path dir(out.empty() ? "." : out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::invalid_argument("cannot create output directory: " + dir.string());
    return dir;
}

// The input kind is decided by the CSV header: correspondence files start
// with u1,v1,u2,v2 and are linearized on the fly; anything else is read as a
// problem CSV with its JSON sidecar.
maxcon::FittingProblem load_problem(const InputOpts& o) {
    std::ifstream probe(o.input);
    if (!probe) throw std::invalid_argument("cannot open: " + o.input);
    std::string header;
    std::getline(probe, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
    probe.close();

    if (header == "u1,v1,u2,v2") {
        auto c = maxcon::read_correspondences_csv(o.input);
        const double eps = o.epsilon > 0.0 ? o.epsilon : 0.03;
        return maxcon::linearize_fundamental(c, eps);
    }
    const std::string sidecar =
        o.sidecar.empty() ? fs::path(o.input).replace_extension(".json").string() : o.sidecar;
    auto p = maxcon::read_problem_csv(o.input, sidecar);
    if (o.epsilon > 0.0) p.epsilon = o.epsilon;
    return p;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------- subcommand bodies ----------

int cmd_generate(const GenerateOpts& o, const std::string& out) {
    auto dir = prepare_out(out);
    maxcon::SyntheticSpec spec;
    spec.n_points = o.n;
    spec.outlier_ratio = o.ratio;
    spec.sigma_in = o.sigma_in;
    spec.sigma_out = o.sigma_out;
    spec.epsilon = o.epsilon;
    spec.seed = o.seed;
    auto inst = maxcon::generate_synthetic(spec);
    maxcon::write_problem_csv((dir / "problem.csv").string(), (dir / "problem.json").string(),
                              inst.problem);
    maxcon::write_truth_json((dir / "truth.json").string(), inst);
    write_manifest(dir, "generate", to_json(o));
    int corrupted = 0;
    for (auto m : inst.inlier_mask) corrupted += m ? 0 : 1;
    std::cout << "points=" << inst.problem.n_points() << " corrupted=" << corrupted << "\n";
    return 0;
}

int cmd_solve(const SolveOpts& o, const std::string& out) {
    auto dir = prepare_out(out);
    auto p = load_problem(o.in);

    maxcon::DriverConfig cfg;
    cfg.max_iterations = o.iterations;
    cfg.lambda_initial = o.lambda;
    cfg.lambda_floor = o.lambda_floor;
    cfg.decay_factor = o.decay_factor;
    cfg.decay_period = o.decay_period;
    cfg.seed = o.seed;
    if (o.variant == "full")
        cfg.variant = maxcon::Variant::Full;
    else if (o.variant == "early")
        cfg.variant = maxcon::Variant::EarlyStop;
    else
        throw std::invalid_argument("variant must be 'full' or 'early'");
    if (o.backend == "sa")
        cfg.backend = maxcon::Backend::SimulatedAnnealing;
    else if (o.backend == "exact")
        cfg.backend = maxcon::Backend::Exact;
    else
        throw std::invalid_argument("backend must be 'sa' or 'exact'");
    cfg.anneal.restarts = o.restarts;
    cfg.anneal.sweeps = o.sweeps;
    cfg.anneal.threads = o.threads;

    const auto t0 = std::chrono::steady_clock::now();
    auto rep = maxcon::run(p, cfg);
    const double elapsed = seconds_since(t0);

    json r;
    r["n_points"] = rep.n_points;
    r["epsilon"] = rep.epsilon_used;
    r["consensus"] = rep.consensus;
    r["witness"] = rep.witness;
    r["z_best"] = std::vector<int>(rep.z_best.bits.begin(), rep.z_best.bits.end());
    r["error_bound"] = rep.error_bound;
    r["iterations_run"] = rep.records.size();
    json edges = json::array();
    for (const auto& e : rep.edges.edges) edges.push_back(e.v);
    r["edges"] = edges;
    write_text(dir / "report.json", r.dump(2) + "\n");

    std::ofstream os(dir / "iterations.csv");
    if (!os) throw std::invalid_argument("cannot open for writing: iterations.csv");
    maxcon::write_iterations_csv(os, rep);
    os.close();

    write_manifest(dir, "solve", to_json(o));
    char tbuf[32];
    std::snprintf(tbuf, sizeof tbuf, "%.3f", elapsed);
    std::cout << "consensus=" << rep.consensus.size() << " bound=" << fmt(rep.error_bound)
              << " time=" << tbuf << "\n";
    return 0;
}

int cmd_ransac(const RansacOpts& o, const std::string& out) {
    auto dir = prepare_out(out);
    auto p = load_problem(o.in);
    const auto t0 = std::chrono::steady_clock::now();
    auto r = maxcon::ransac_baseline(p, o.iterations, o.seed);
    const double elapsed = seconds_since(t0);

    json j{{"consensus", r.consensus}, {"model", r.model}};
    write_text(dir / "ransac.json", j.dump(2) + "\n");
    write_manifest(dir, "ransac", to_json(o));
    char tbuf[32];
    std::snprintf(tbuf, sizeof tbuf, "%.3f", elapsed);
    std::cout << "consensus=" << r.consensus.size() << " time=" << tbuf << "\n";
    return 0;
}

int cmd_enumerate(const InputOpts& o, const std::string& out) {
    auto dir = prepare_out(out);
    auto p = load_problem(o);
    auto h = maxcon::enumerate_infeasible_bases(p);
    auto cover = maxcon::solve_cover_exact(h);
    const double lp = maxcon::lp_lower_bound(h);

    json j;
    j["n_vertices"] = h.n_vertices;
    j["max_edge_size"] = h.max_edge_size;
    json edges = json::array();
    for (const auto& e : h.edges) edges.push_back(e.v);
    j["edges"] = edges;
    std::vector<int> cov;
    for (int i = 0; i < h.n_vertices; ++i)
        if (cover.z.bits[i]) cov.push_back(i);
    j["cover"] = cov;
    j["cover_size"] = cover.size;
    j["lp_bound"] = lp;
    write_text(dir / "edges.json", j.dump(2) + "\n");
    write_manifest(dir, "enumerate", [&] {
        json m;
        input_json(m, o);
        return m;
    }());
    std::cout << "edges=" << h.size() << " cover=" << cover.size << " lp=" << fmt(lp) << "\n";
    return 0;
}

int cmd_qubo_export(const QuboOpts& o, const std::string& out) {
    auto dir = prepare_out(out);
    auto p = load_problem(o.in);
    auto h = maxcon::enumerate_infeasible_bases(p);
    auto q = maxcon::build_qubo(h, o.lambda);
    std::ofstream os(dir / "qubo.txt");
    if (!os) throw std::invalid_argument("cannot open for writing: qubo.txt");
    maxcon::write_qubo(os, q);
    os.close();
    write_manifest(dir, "qubo-export", to_json(o));
    std::cout << "variables=" << q.n << " constraints=" << h.size() << "\n";
    return 0;
}

int cmd_spectral_gap(const GapOpts& o, const std::string& out) {
    if (!(o.lambda_min > 0.0) || !(o.lambda_max >= o.lambda_min))
        throw std::invalid_argument("spectral-gap: need 0 < lambda-min <= lambda-max");
    if (o.count < 1) throw std::invalid_argument("spectral-gap: count must be >= 1");
    auto dir = prepare_out(out);
    auto p = load_problem(o.in);
    auto h = maxcon::enumerate_infeasible_bases(p);

    std::vector<maxcon::LambdaGapRow> rows(o.count);
    bool degenerate = false;
    for (int k = 0; k < o.count; ++k) {
        const double t = o.count == 1 ? 0.0 : static_cast<double>(k) / (o.count - 1);
        const double lam = o.lambda_min * std::pow(o.lambda_max / o.lambda_min, t);
        auto q = maxcon::build_qubo(h, lam);
        auto m = maxcon::to_ising(q);
        auto prof = maxcon::spectral_gap(m, o.grid);
        rows[k] = {lam, prof.min_gap};
        degenerate = degenerate || prof.degenerate;
    }

    std::ofstream os(dir / "gap.csv");
    if (!os) throw std::invalid_argument("cannot open for writing: gap.csv");
    maxcon::write_lambda_gap_csv(os, rows);
    os.close();
    write_manifest(dir, "spectral-gap", to_json(o));
    std::cout << "rows=" << rows.size() << " gap_at_min_lambda=" << fmt(rows.front().min_gap)
              << " gap_at_max_lambda=" << fmt(rows.back().min_gap)
              << (degenerate ? " degenerate=1" : "") << "\n";
    return 0;
}

// ---------- --config expansion ----------

// Pulls --config out of the raw arguments, validates it against the chosen
// subcommand, and splices its recorded options in right after the subcommand
// token so explicit flags (parsed later, take-last) win.
std::vector<std::string> expand_config(const std::vector<std::string>& raw) {
    std::string cfg_path;
    std::vector<std::string> args;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == "--config") {
            if (i + 1 >= raw.size()) throw std::invalid_argument("--config needs a file path");
            cfg_path = raw[++i];
        } else if (raw[i].rfind("--config=", 0) == 0) {
            cfg_path = raw[i].substr(9);
        } else {
            args.push_back(raw[i]);
        }
    }
    if (cfg_path.empty()) return args;
    if (args.empty() || args[0].rfind("-", 0) == 0)
        throw std::invalid_argument("--config requires a subcommand");

    std::ifstream is(cfg_path);
    if (!is) throw std::invalid_argument("cannot open: " + cfg_path);
    json m;
    try {
        is >> m;
    } catch (const json::exception& e) {
        throw std::invalid_argument(cfg_path + ": bad JSON (" + e.what() + ")");
    }
    if (!m.contains("command") || !m.contains("options") || !m["options"].is_object())
        throw std::invalid_argument(cfg_path + ": not a manifest");
    if (m["command"].get<std::string>() != args[0])
        throw std::invalid_argument(cfg_path + ": manifest was written by '" +
                                    m["command"].get<std::string>() + "', not '" + args[0] + "'");

    std::vector<std::string> merged{args[0]};
    for (const auto& [key, value] : m["options"].items()) {
        merged.push_back("--" + key);
        merged.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    merged.insert(merged.end(), args.begin() + 1, args.end());
    return merged;
}

CLI::Option* last(CLI::Option* opt) {
    return opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

void add_out_opt(CLI::App* sub, std::string& out) {
    last(sub->add_option("-o,--out", out, "output directory (default: .)"));
}

void add_input_opts(CLI::App* sub, InputOpts& o, bool required = true) {
    auto* in = last(sub->add_option("--input", o.input,
                                    "points CSV (with JSON sidecar) or u1,v1,u2,v2 pairs CSV"));
    if (required) in->required();
    last(sub->add_option("--sidecar", o.sidecar, "sidecar path (default: input with .json)"));
    last(sub->add_option("--epsilon", o.epsilon,
                         "residual tolerance override (pairs default: 0.03)"));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust fitting via hypergraph covers compiled to binary quadratic models"};
    app.set_version_flag("--version", maxcon::kVersion);
    app.require_subcommand(1);

    std::string out = ".";
    std::string config_doc;  // --config is handled before parsing; shown in help only

    GenerateOpts gen;
    auto* g = app.add_subcommand("generate", "write a synthetic scalar regression instance");
    add_out_opt(g, out);
    last(g->add_option("--n", gen.n, "number of points"));
    last(g->add_option("--ratio", gen.ratio, "corrupted fraction (floor(ratio*n) points)"));
    last(g->add_option("--sigma-in", gen.sigma_in, "inlier noise scale"));
    last(g->add_option("--sigma-out", gen.sigma_out, "corruption noise scale"));
    last(g->add_option("--epsilon", gen.epsilon, "residual tolerance stored with the instance"));
    last(g->add_option("--seed", gen.seed, "generator seed"));
    g->add_option("--config", config_doc, "replay options from a manifest.json");

    SolveOpts sol;
    auto* s = app.add_subcommand("solve", "run the alternating cover-and-verify solver");
    add_out_opt(s, out);
    add_input_opts(s, sol.in);
    last(s->add_option("--iterations", sol.iterations, "maximum outer iterations"));
    last(s->add_option("--lambda", sol.lambda, "initial penalty weight"));
    last(s->add_option("--lambda-floor", sol.lambda_floor, "penalty decay floor"));
    last(s->add_option("--decay-factor", sol.decay_factor, "penalty divisor per period"));
    last(s->add_option("--decay-period", sol.decay_period, "iterations between decays"));
    last(s->add_option("--variant", sol.variant, "'full' or 'early' (stop at first hit)"));
    last(s->add_option("--backend", sol.backend, "'sa' or 'exact' inner solver"));
    last(s->add_option("--seed", sol.seed, "run seed"));
    last(s->add_option("--restarts", sol.restarts, "annealer restarts per iteration"));
    last(s->add_option("--sweeps", sol.sweeps, "annealer sweeps (0: auto)"));
    last(s->add_option("--threads", sol.threads, "annealer threads (0: hardware)"));
    s->add_option("--config", config_doc, "replay options from a manifest.json");

    RansacOpts ran;
    auto* r = app.add_subcommand("ransac", "run the hypothesize-and-verify baseline");
    add_out_opt(r, out);
    add_input_opts(r, ran.in);
    last(r->add_option("--iterations", ran.iterations, "sampling iterations"));
    last(r->add_option("--seed", ran.seed, "sampling seed"));
    r->add_option("--config", config_doc, "replay options from a manifest.json");

    InputOpts enu;
    auto* e = app.add_subcommand("enumerate", "list all minimal infeasible bases and cover them");
    add_out_opt(e, out);
    add_input_opts(e, enu);
    e->add_option("--config", config_doc, "replay options from a manifest.json");

    QuboOpts qb;
    auto* q = app.add_subcommand("qubo-export", "compile the penalty matrix and write it as text");
    add_out_opt(q, out);
    add_input_opts(q, qb.in);
    last(q->add_option("--lambda", qb.lambda, "penalty weight"));
    q->add_option("--config", config_doc, "replay options from a manifest.json");

    GapOpts gap;
    auto* sg = app.add_subcommand("spectral-gap",
                                  "minimum excitation gap over a log grid of penalty weights");
    add_out_opt(sg, out);
    add_input_opts(sg, gap.in);
    last(sg->add_option("--lambda-min", gap.lambda_min, "low end of the penalty sweep"));
    last(sg->add_option("--lambda-max", gap.lambda_max, "high end of the penalty sweep"));
    last(sg->add_option("--count", gap.count, "number of log-spaced penalty samples"));
    last(sg->add_option("--grid", gap.grid, "interpolation samples per gap profile"));
    sg->add_option("--config", config_doc, "replay options from a manifest.json");

    try {
        auto merged = expand_config({argv + 1, argv + argc});
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(g)) return cmd_generate(gen, out);
        if (app.got_subcommand(s)) return cmd_solve(sol, out);
        if (app.got_subcommand(r)) return cmd_ransac(ran, out);
        if (app.got_subcommand(e)) return cmd_enumerate(enu, out);
        if (app.got_subcommand(q)) return cmd_qubo_export(qb, out);
        if (app.got_subcommand(sg)) return cmd_spectral_gap(gap, out);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "solver failure: " << ex.what() << "\n";
        return 3;
    }
    return 0;
}
