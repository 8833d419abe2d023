#include "stokes/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

namespace stokes {

namespace fs = std::filesystem;

std::string to_string(Command c) {
    switch (c) {
        case Command::Run: return "run";
        case Command::MgBench: return "mg-bench";
        case Command::Spectrum: return "spectrum";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// JSON helpers

void merge_json(json& base, const json& patch) {
    if (!base.is_object() || !patch.is_object()) {
        base = patch;
        return;
    }
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        if (base.contains(it.key()) && base[it.key()].is_object() && it.value().is_object()) {
            merge_json(base[it.key()], it.value());
        } else {
            base[it.key()] = it.value();
        }
    }
}

void set_path(json& tree, const std::string& dotted, const json& value) {
    json* node = &tree;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("invalid sweep path '" + dotted + "'");
        if (!node->is_object()) throw ConfigError("sweep path '" + dotted + "' crosses a non-object value");
        if (dot == std::string::npos) {
            json& slot = (*node)[key];
            if (slot.is_object() && value.is_object()) {
                merge_json(slot, value);
            } else {
                slot = value;
            }
            return;
        }
        if (!node->contains(key)) (*node)[key] = json::object();
        node = &(*node)[key];
        start = dot + 1;
    }
}

namespace {

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
    }
}

template <class T>
T get_or(const json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("'" + where + "." + key + "' has the wrong type");
    }
}

int get_int(const json& obj, const char* key, const std::string& where, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + where + "." + key + "' must be an integer");
    return v.get<int>();
}

double get_number(const json& obj, const char* key, const std::string& where, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    }
    throw ConfigError("'" + where + "." + key + "' must be a number");
}

template <class F>
auto wrap_errors(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

GridSpec parse_grid(const json& p) {
    const int dim = get_int(p, "dim", "problem", 2);
    if (dim != 2 && dim != 3) throw ConfigError("problem.dim must be 2 or 3");
    GridSpec g;
    g.dim = dim;
    g.h = get_number(p, "h", "problem", 1.0);
    if (!p.contains("n")) throw ConfigError("problem.n is required");
    const json& n = p.at("n");
    for (int a = 0; a < 3; ++a) g.n[a] = 1;
    if (n.is_number_integer()) {
        for (int a = 0; a < dim; ++a) g.n[a] = n.get<int>();
    } else if (n.is_array() && static_cast<int>(n.size()) == dim) {
        for (int a = 0; a < dim; ++a) {
            if (!n[a].is_number_integer()) throw ConfigError("problem.n entries must be integers");
            g.n[a] = n[a].get<int>();
        }
    } else {
        throw ConfigError("problem.n must be an integer or a list of dim integers");
    }
    for (int a = 0; a < dim; ++a) {
        if (g.n[a] < 4 || g.n[a] % 2 != 0) throw ConfigError("problem.n must be even and at least 4 along every axis");
    }
    const json bc = p.contains("bc") ? p.at("bc") : json("noslip");
    for (int a = 0; a < 3; ++a) g.bc[a] = {BcKind::Periodic, BcKind::Periodic};
    wrap_errors("problem.bc", [&] {
        if (bc.is_string()) {
            const BcKind k = bc_from_string(bc.get<std::string>());
            for (int a = 0; a < dim; ++a) g.bc[a] = {k, k};
        } else if (bc.is_array() && static_cast<int>(bc.size()) == 2 * dim) {
            for (int a = 0; a < dim; ++a) {
                g.bc[a] = {bc_from_string(bc[2 * a].get<std::string>()), bc_from_string(bc[2 * a + 1].get<std::string>())};
            }
        } else {
            throw ConfigError("problem.bc must be a string or a list of 2*dim strings");
        }
        g.validate();
        return 0;
    });
    return g;
}

ProblemConfig parse_problem(const json& p) {
    check_keys(p, "problem", {"dim", "n", "h", "bc", "kind", "mu0", "rho0", "gamma0", "form", "cfl_beta", "theta",
                              "bubble", "seed", "rescale"});
    ProblemConfig pc;
    pc.grid = parse_grid(p);
    pc.kind = get_or<std::string>(p, "kind", "problem", "constant");
    if (pc.kind != "constant" && pc.kind != "bubble") throw ConfigError("problem.kind must be 'constant' or 'bubble'");
    pc.mu0 = get_number(p, "mu0", "problem", 1.0);
    pc.rho0 = get_number(p, "rho0", "problem", 1.0);
    pc.gamma0 = get_number(p, "gamma0", "problem", 0.0);
    if (pc.mu0 < 0.0 || !(pc.rho0 > 0.0) || pc.gamma0 < 0.0) {
        throw ConfigError("problem requires mu0 >= 0, rho0 > 0, gamma0 >= 0");
    }
    pc.form = wrap_errors("problem.form", [&] {
        return viscous_form_from_string(get_or<std::string>(p, "form", "problem", "stress"));
    });
    if (p.contains("theta") && p.contains("cfl_beta")) throw ConfigError("problem.theta and problem.cfl_beta are exclusive");
    if (p.contains("theta")) {
        pc.theta = get_number(p, "theta", "problem", 0.0);
        if (!(*pc.theta >= 0.0) || std::isinf(*pc.theta)) throw ConfigError("problem.theta must be finite and >= 0");
    }
    pc.cfl.beta = get_number(p, "cfl_beta", "problem", std::numeric_limits<double>::infinity());
    wrap_errors("problem.cfl_beta", [&] {
        pc.cfl.validate();
        return 0;
    });
    if (p.contains("bubble")) {
        const json& b = p.at("bubble");
        check_keys(b, "problem.bubble", {"r_mu", "r_rho", "epsilon", "noise_amp", "positive_outside"});
        pc.bubble.r_mu = get_number(b, "r_mu", "problem.bubble", 100.0);
        pc.bubble.r_rho = get_number(b, "r_rho", "problem.bubble", 100.0);
        pc.bubble.epsilon = get_number(b, "epsilon", "problem.bubble", 0.0);
        pc.bubble.noise_amp = get_number(b, "noise_amp", "problem.bubble", 0.1);
        pc.bubble.positive_outside = get_or<bool>(b, "positive_outside", "problem.bubble", true);
    }
    if (p.contains("seed")) {
        const json& s = p.at("seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError("problem.seed must be a nonnegative integer");
        }
        pc.seed = s.get<std::uint64_t>();
    }
    pc.rescale = get_or<bool>(p, "rescale", "problem", true);
    wrap_errors("problem", [&] {
        pc.bubble.mu0 = pc.mu0;
        pc.bubble.rho0 = pc.rho0;
        pc.bubble.validate();
        if (pc.resolved_theta() == 0.0 && pc.mu0 == 0.0) throw ConfigError("steady flow needs mu0 > 0");
        return 0;
    });
    return pc;
}

void parse_solver(const json& s, PrecondConfig& pc, GmresConfig& gc) {
    check_keys(s, "solver", {"precond", "velocity_cycles", "pressure_cycles", "schur_sign", "exact_subsolvers", "gmres",
                             "smoother"});
    wrap_errors("solver", [&] {
        pc.kind = precond_kind_from_string(get_or<std::string>(s, "precond", "solver", "P2"));
        pc.schur.sign = schur_sign_from_string(get_or<std::string>(s, "schur_sign", "solver", "minus"));
        return 0;
    });
    pc.velocity_cycles = get_int(s, "velocity_cycles", "solver", 1);
    pc.schur.pressure_cycles = get_int(s, "pressure_cycles", "solver", 1);
    pc.exact_subsolvers = get_or<bool>(s, "exact_subsolvers", "solver", false);
    if (s.contains("smoother")) {
        const json& m = s.at("smoother");
        check_keys(m, "solver.smoother", {"omega", "sweeps_down", "sweeps_up", "bottom_sweeps"});
        pc.smoother.omega = get_number(m, "omega", "solver.smoother", 1.0);
        pc.smoother.sweeps_down = get_int(m, "sweeps_down", "solver.smoother", 2);
        pc.smoother.sweeps_up = get_int(m, "sweeps_up", "solver.smoother", 2);
        pc.smoother.bottom_sweeps = get_int(m, "bottom_sweeps", "solver.smoother", 8);
    }
    if (s.contains("gmres")) {
        const json& g = s.at("gmres");
        check_keys(g, "solver.gmres", {"restart", "max_iters", "rtol", "atol", "true_rtol", "track_true_residual"});
        gc.restart = get_int(g, "restart", "solver.gmres", 10);
        gc.max_iters = get_int(g, "max_iters", "solver.gmres", 200);
        gc.rtol = get_number(g, "rtol", "solver.gmres", 1e-9);
        gc.atol = get_number(g, "atol", "solver.gmres", 0.0);
        gc.true_rtol = get_number(g, "true_rtol", "solver.gmres", 0.0);
        gc.track_true_residual = get_or<bool>(g, "track_true_residual", "solver.gmres", true);
    }
    wrap_errors("solver", [&] {
        pc.validate();
        gc.validate();
        return 0;
    });
}

MgBenchConfig parse_mg(const json& m) {
    check_keys(m, "mg_bench", {"targets", "sweeps", "cycles", "rhs"});
    MgBenchConfig c;
    if (m.contains("targets")) {
        c.targets = get_or<std::vector<std::string>>(m, "targets", "mg_bench", {});
        for (const auto& t : c.targets) {
            if (t != "pressure" && t != "velocity") throw ConfigError("mg_bench.targets entries must be pressure or velocity");
        }
        if (c.targets.empty()) throw ConfigError("mg_bench.targets must not be empty");
    }
    if (m.contains("sweeps")) {
        c.sweeps = get_or<std::vector<int>>(m, "sweeps", "mg_bench", {});
        if (c.sweeps.empty()) throw ConfigError("mg_bench.sweeps must not be empty");
        for (int s : c.sweeps) {
            if (s < 1) throw ConfigError("mg_bench.sweeps entries must be >= 1");
        }
    }
    c.cycles = get_int(m, "cycles", "mg_bench", 15);
    if (c.cycles < 1) throw ConfigError("mg_bench.cycles must be >= 1");
    const std::string rhs = get_or<std::string>(m, "rhs", "mg_bench", "random");
    if (rhs != "random" && rhs != "zero") throw ConfigError("mg_bench.rhs must be random or zero");
    c.zero_rhs = rhs == "zero";
    return c;
}

SpectrumConfig parse_spectrum(const json& s) {
    check_keys(s, "spectrum", {"which", "bins", "tol_zero_rel", "tol_unit", "cluster_lo", "cluster_hi", "write_eigenvalues"});
    SpectrumConfig c;
    if (s.contains("which")) {
        c.which.clear();
        for (const auto& w : get_or<std::vector<std::string>>(s, "which", "spectrum", {})) {
            c.which.push_back(wrap_errors("spectrum.which", [&] { return spectrum_which_from_string(w); }));
        }
        if (c.which.empty()) throw ConfigError("spectrum.which must not be empty");
    }
    c.options.bins = get_int(s, "bins", "spectrum", 50);
    c.options.tol_zero_rel = get_number(s, "tol_zero_rel", "spectrum", 1e-8);
    c.options.tol_unit = get_number(s, "tol_unit", "spectrum", 1e-8);
    c.options.cluster_lo = get_number(s, "cluster_lo", "spectrum", 0.99);
    c.options.cluster_hi = get_number(s, "cluster_hi", "spectrum", 1.01);
    c.write_eigenvalues = get_or<bool>(s, "write_eigenvalues", "spectrum", true);
    if (c.options.bins < 1) throw ConfigError("spectrum.bins must be >= 1");
    return c;
}

// Cartesian product of sweep lists, keys in sorted order, last key fastest.
std::vector<json> expand_sweep(const json& sweep) {
    std::vector<json> points{json::object()};
    if (sweep.is_null()) return points;
    if (!sweep.is_object()) throw ConfigError("'sweep' must be an object of lists");
    for (auto it = sweep.begin(); it != sweep.end(); ++it) {
        if (!it.value().is_array() || it.value().empty()) {
            throw ConfigError("sweep entry '" + it.key() + "' must be a non-empty list");
        }
        std::vector<json> next;
        for (const auto& p : points) {
            for (const auto& v : it.value()) {
                json q = p;
                q[it.key()] = v;
                next.push_back(std::move(q));
            }
        }
        points = std::move(next);
    }
    return points;
}

}  // namespace

double ProblemConfig::resolved_theta() const {
    if (theta) return *theta;
    return cfl_to_theta(cfl, mu0, rho0, grid.h);
}

CoefficientSet ProblemConfig::coefficients() const {
    const double th = resolved_theta();
    // Zero CFL number is the inviscid limit.
    const double mu = !theta && cfl.inviscid() ? 0.0 : mu0;
    if (kind == "bubble") {
        BubbleSpec b = bubble;
        b.mu0 = mu;
        b.rho0 = rho0;
        return bubble_coefficients(grid, b, th, form);
    }
    return constant_coefficients(grid, mu, rho0, th, form, gamma0);
}

Experiment build_experiment(json config, Command command, std::optional<std::uint64_t> seed_override,
                            bool full_size) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object");
    check_keys(config, "config", {"name", "description", "command", "problem", "solver", "mg_bench", "spectrum", "sweep",
                                  "full_size"});
    if (config.contains("command")) {
        const std::string c = get_or<std::string>(config, "command", "config", "");
        if (c != to_string(command)) {
            throw ConfigError("config is meant for the '" + c + "' command, not '" + to_string(command) + "'");
        }
    }
    if (full_size) {
        if (!config.contains("full_size")) throw ConfigError("config has no full_size block");
        const json patch = config.at("full_size");
        if (!patch.is_object()) throw ConfigError("'full_size' must be an object");
        // Sweep lists are replaced wholesale rather than merged.
        if (patch.contains("sweep")) {
            for (auto it = patch.at("sweep").begin(); it != patch.at("sweep").end(); ++it) {
                config["sweep"][it.key()] = it.value();
            }
        }
        json rest = patch;
        rest.erase("sweep");
        merge_json(config, rest);
    }
    if (seed_override) config["problem"]["seed"] = *seed_override;
    if (!config.contains("problem")) throw ConfigError("config needs a 'problem' block");

    Experiment exp;
    exp.name = get_or<std::string>(config, "name", "config", "experiment");
    if (exp.name.empty() || exp.name.find('/') != std::string::npos) throw ConfigError("config.name must be a plain file name");
    exp.command = command;
    exp.config = config;

    const auto points = expand_sweep(config.contains("sweep") ? config.at("sweep") : json());
    int index = 0;
    for (const auto& params : points) {
        json resolved = config;
        resolved.erase("sweep");
        resolved.erase("full_size");
        for (auto it = params.begin(); it != params.end(); ++it) set_path(resolved, it.key(), it.value());
        RunSpec run;
        char label[32];
        std::snprintf(label, sizeof label, "run-%03d", index++);
        run.label = label;
        run.params = params;
        run.config = resolved;
        check_keys(resolved, "config", {"name", "description", "command", "problem", "solver", "mg_bench", "spectrum"});
        run.problem = parse_problem(resolved.at("problem"));
        parse_solver(resolved.contains("solver") ? resolved.at("solver") : json::object(), run.precond, run.gmres);
        if (resolved.contains("mg_bench")) run.mg = parse_mg(resolved.at("mg_bench"));
        if (resolved.contains("spectrum")) run.spectrum = parse_spectrum(resolved.at("spectrum"));

        const GridSpec& g = run.problem.grid;
        if (command == Command::Run && run.precond.exact_subsolvers && g.num_unknowns() > kDenseCap) {
            throw ConfigError(run.label + ": exact subsolvers need at most " + std::to_string(kDenseCap) + " unknowns");
        }
        if (command == Command::Spectrum) {
            if (g.num_cells() > kSpectrumCellCap) {
                throw ConfigError(run.label + ": spectrum grid exceeds the dense cap of " +
                                  std::to_string(kSpectrumCellCap) + " cells");
            }
            for (SpectrumWhich w : run.spectrum.which) {
                if (w == SpectrumWhich::PrecondS && run.problem.resolved_theta() != 0.0) {
                    throw ConfigError(run.label + ": preconditioned Schur spectrum requires steady flow");
                }
            }
        }
        exp.runs.push_back(std::move(run));
    }
    return exp;
}

// ---------------------------------------------------------------------------
// Output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string history_csv(const ConvergenceHistory& h) {
    std::ostringstream os;
    os << "iteration,scalar_vcycles,resid_precond,resid_true,restart_flag\r\n";
    for (const auto& r : h.records) {
        os << r.iteration << ',' << r.scalar_vcycles << ',' << format_double(r.resid_precond) << ','
           << format_double(r.resid_true) << ',' << (r.restart ? 1 : 0) << "\r\n";
    }
    return os.str();
}

json spectrum_json(const SpectrumReport& rep, bool with_eigenvalues) {
    json j;
    j["which"] = to_string(rep.which);
    j["n_dof"] = rep.n_dof;
    j["tol_zero"] = rep.tol_zero;
    j["zero_count"] = rep.zero_count;
    j["nonpositive_count"] = rep.nonpositive_count;
    j["non_unit_count"] = rep.non_unit_count;
    j["min_nonzero"] = rep.min_nonzero;
    j["max_nonzero"] = rep.max_nonzero;
    j["cluster_fraction"] = rep.cluster_fraction;
    j["operator_cluster_fraction"] = rep.operator_cluster_fraction;
    j["histogram"] = {{"edges", rep.bin_edges}, {"counts", rep.bin_counts}};
    if (with_eigenvalues) j["eigenvalues"] = rep.eigenvalues;
    return j;
}

void write_atomic(const fs::path& path, const std::string& contents) {
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

namespace {

std::string histogram_csv(const SpectrumReport& rep) {
    std::ostringstream os;
    os << "bin_lo,bin_hi,count\r\n";
    for (std::size_t b = 0; b < rep.bin_counts.size(); ++b) {
        os << format_double(rep.bin_edges[b]) << ',' << format_double(rep.bin_edges[b + 1]) << ',' << rep.bin_counts[b]
           << "\r\n";
    }
    return os.str();
}

double relative_error(const StokesVector& x, const StokesVector& ref) {
    StokesVector d = x;
    axpy(-1.0, ref, d);
    const double n = norm2(ref);
    return n > 0.0 ? norm2(d) / n : norm2(d);
}

RunOutcome run_solve(const RunSpec& run, const fs::path& dir) {
    RunOutcome out;
    const CoefficientSet coeff = run.problem.coefficients();
    const ManufacturedProblem mp = make_rhs(coeff, run.problem.seed);
    RescaledSystem sys = run.problem.rescale ? rescale(coeff, mp.rhs) : RescaledSystem{coeff, mp.rhs, {}};
    Preconditioner P(sys.coeff, run.precond);
    const GmresResult res = gmres_solve(sys.rhs, sys.coeff, P, run.gmres);
    const StokesVector x = unscale_solution(res.x, sys.spec);

    const std::string csv = run.label + ".csv";
    write_atomic(dir / csv, history_csv(res.history));
    out.files.push_back(csv);
    const auto& last = res.history.records.back();
    const auto& first = res.history.records.front();
    out.ok = res.history.converged();
    out.summary = {{"status", to_string(res.history.status)},
                   {"iterations", res.history.iterations},
                   {"scalar_vcycles", last.scalar_vcycles},
                   {"resid_precond_rel", first.resid_precond > 0 ? last.resid_precond / first.resid_precond : 0.0},
                   {"resid_true_rel", first.resid_true > 0 ? last.resid_true / first.resid_true : 0.0},
                   {"error_rel", relative_error(x, mp.x_exact)},
                   {"rescale_c", sys.spec.c},
                   {"theta", coeff.theta}};
    return out;
}

RunOutcome run_mg(const RunSpec& run, const fs::path& dir) {
    RunOutcome out;
    const CoefficientSet coeff = run.problem.coefficients();
    const GridSpec& g = coeff.grid;
    std::ostringstream os;
    os << "target,sweeps,cycle,rel_residual\r\n";
    json finals = json::object();
    for (const auto& target : run.mg.targets) {
        for (int sw : run.mg.sweeps) {
            SmootherParams sp = run.precond.smoother;
            sp.sweeps_down = sp.sweeps_up = sw;
            std::vector<double> rel;
            if (target == "pressure") {
                CellField b(g);
                if (!run.mg.zero_rhs) {
                    for (std::size_t i = 0; i < b.data.size(); ++i) b.data[i] = 2.0 * uniform01(run.problem.seed, 100, i) - 1.0;
                }
                CellMultigrid(coeff, sp).solve(b, run.mg.cycles, &rel);
            } else {
                FaceField b(g);
                if (!run.mg.zero_rhs) {
                    std::vector<double> v(g.num_velocity_unknowns());
                    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * uniform01(run.problem.seed, 101, i) - 1.0;
                    b = unpack_face(g, v);
                }
                FaceMultigrid(coeff, sp).solve(b, run.mg.cycles, &rel);
            }
            for (std::size_t k = 0; k < rel.size(); ++k) {
                os << target << ',' << sw << ',' << (k + 1) << ',' << format_double(rel[k]) << "\r\n";
            }
            finals[target + "/" + std::to_string(sw)] = rel.back();
        }
    }
    const std::string csv = run.label + ".csv";
    write_atomic(dir / csv, os.str());
    out.files.push_back(csv);
    out.summary = {{"status", "completed"}, {"final_rel_residual", finals}};
    return out;
}

RunOutcome run_spectrum(const RunSpec& run, const fs::path& dir) {
    RunOutcome out;
    const CoefficientSet coeff = run.problem.coefficients();
    json reports = json::array();
    json summary = json::object();
    for (SpectrumWhich w : run.spectrum.which) {
        const SpectrumReport rep = analyze_stokes_spectrum(coeff, w, run.spectrum.options);
        const std::string stem = run.label + "-" + to_string(w);
        write_atomic(dir / (stem + "-histogram.csv"), histogram_csv(rep));
        out.files.push_back(stem + "-histogram.csv");
        reports.push_back(spectrum_json(rep, run.spectrum.write_eigenvalues));
        json s = spectrum_json(rep, false);
        s.erase("histogram");
        summary[to_string(w)] = s;
    }
    const std::string js = run.label + "-spectrum.json";
    write_atomic(dir / js, reports.dump(2) + "\n");
    out.files.push_back(js);
    out.summary = {{"status", "completed"}, {"spectra", summary}};
    return out;
}

}  // namespace

RunOutcome execute_run(const Experiment& exp, const RunSpec& run, const fs::path& dir) {
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out;
    switch (exp.command) {
        case Command::Run: out = run_solve(run, dir); break;
        case Command::MgBench: out = run_mg(run, dir); break;
        case Command::Spectrum: out = run_spectrum(run, dir); break;
    }
    out.label = run.label;
    out.params = run.params;
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int execute_experiment(const Experiment& exp, const fs::path& out_dir, int jobs) {
    if (jobs < 1) jobs = 1;
    const fs::path dir = out_dir / exp.name;
    fs::create_directories(dir);

    std::vector<RunOutcome> outcomes(exp.runs.size());
    std::vector<std::string> errors(exp.runs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < exp.runs.size(); i = next++) {
            try {
                outcomes[i] = execute_run(exp, exp.runs[i], dir);
            } catch (const std::exception& e) {
                errors[i] = e.what();
                outcomes[i].label = exp.runs[i].label;
                outcomes[i].params = exp.runs[i].params;
                outcomes[i].ok = false;
                outcomes[i].summary = {{"status", "error"}, {"error", e.what()}};
            }
        }
    };
    const int workers = std::min<int>(jobs, static_cast<int>(exp.runs.size()));
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool all_ok = true;
    json runs = json::array();
    for (const auto& o : outcomes) {
        all_ok = all_ok && o.ok;
        json r = o.summary;
        r["label"] = o.label;
        r["params"] = o.params;
        r["files"] = o.files;
        r["wall_seconds"] = o.wall_seconds;
        runs.push_back(r);
    }
    const int code = all_ok ? 0 : 1;
    json manifest = {{"tool", "stokes"},
                     {"version", kVersion},
                     {"command", to_string(exp.command)},
                     {"experiment", exp.name},
                     {"prng", kPrngName},
                     {"config", exp.config},
                     {"runs", runs},
                     {"exit_code", code}};
    write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
    return code;
}

}  // namespace stokes
