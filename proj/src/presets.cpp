#include "stokes/experiment.hpp"

namespace stokes {

namespace {

struct Preset {
    const char* name;
    const char* text;
};

// Default sizes are desk scale; `full_size` restores the larger runs.
const Preset kPresets[] = {
    {"fig1-mg-sweeps", R"({
  "name": "fig1-mg-sweeps",
  "description": "Multigrid residual per V-cycle for 1 to 4 smoothing sweeps, pressure and velocity, constant coefficients, no-slip",
  "command": "mg-bench",
  "problem": {"dim": 2, "n": 256, "bc": "noslip", "kind": "constant", "seed": 1},
  "mg_bench": {"targets": ["pressure", "velocity"], "sweeps": [1, 2, 3, 4], "cycles": 15},
  "sweep": {"problem": [{"dim": 2, "n": 256}, {"dim": 3, "n": 32}]},
  "full_size": {"sweep": {"problem": [{"dim": 2, "n": 512}, {"dim": 3, "n": 128}]}}
})"},
    {"fig2-vcycles", R"({
  "name": "fig2-vcycles",
  "description": "GMRES convergence versus V-cycles per subsolve, steady bubble, P1 and P2",
  "command": "run",
  "problem": {"dim": 2, "n": 128, "bc": "noslip", "kind": "bubble", "seed": 1},
  "solver": {"precond": "P2", "gmres": {"restart": 10, "max_iters": 200, "rtol": 1e-10}},
  "sweep": {"solver.precond": ["P1", "P2"], "solver.velocity_cycles": [1, 2, 4]},
  "full_size": {"problem": {"dim": 3, "n": 128}}
})"},
    {"fig3-restarts", R"({
  "name": "fig3-restarts",
  "description": "GMRES convergence versus restart length, steady bubble, P2",
  "command": "run",
  "problem": {"dim": 2, "n": 128, "bc": "noslip", "kind": "bubble", "seed": 1},
  "solver": {"precond": "P2", "gmres": {"max_iters": 300, "rtol": 1e-10}},
  "sweep": {"solver.gmres.restart": [5, 10, 20, 50]},
  "full_size": {"problem": {"dim": 3, "n": 128}}
})"},
    {"fig4-precond-compare", R"({
  "name": "fig4-precond-compare",
  "description": "All five preconditioners on the steady bubble with one V-cycle per subsolve",
  "command": "run",
  "problem": {"dim": 2, "n": 128, "bc": "noslip", "kind": "bubble", "seed": 1},
  "solver": {"gmres": {"restart": 10, "max_iters": 300, "rtol": 1e-10}},
  "sweep": {"solver.precond": ["P1", "P2", "P3", "P4", "P5"]},
  "full_size": {"problem": {"dim": 3, "n": 128}}
})"},
    {"fig5-cfl", R"({
  "name": "fig5-cfl",
  "description": "Effect of the viscous CFL number on P1 and P2, bubble",
  "command": "run",
  "problem": {"dim": 2, "n": 64, "bc": "noslip", "kind": "bubble", "seed": 1},
  "solver": {"gmres": {"restart": 10, "max_iters": 300, "rtol": 1e-10}},
  "sweep": {"solver.precond": ["P1", "P2"], "problem.cfl_beta": [0, 1, 10000, "inf"]},
  "full_size": {"problem": {"dim": 3, "n": 128}}
})"},
    {"fig6-scaling", R"({
  "name": "fig6-scaling",
  "description": "Iterations versus grid size at viscosity and density contrast 2, P1 and P2",
  "command": "run",
  "problem": {"dim": 2, "n": 32, "bc": "noslip", "kind": "bubble", "seed": 1,
              "bubble": {"r_mu": 2, "r_rho": 2}},
  "solver": {"gmres": {"restart": 10, "max_iters": 300, "rtol": 1e-10}},
  "sweep": {"solver.precond": ["P1", "P2"],
            "problem": [{"dim": 2, "n": 32}, {"dim": 2, "n": 64}, {"dim": 2, "n": 128}, {"dim": 2, "n": 256},
                        {"dim": 3, "n": 16}, {"dim": 3, "n": 32}]},
  "full_size": {"sweep": {"problem": [{"dim": 2, "n": 512}, {"dim": 3, "n": 64}, {"dim": 3, "n": 128},
                                      {"dim": 3, "n": 256}]}}
})"},
    {"fig7-spectrum", R"({
  "name": "fig7-spectrum",
  "description": "Eigenvalues of M and of the preconditioned Schur complement, constant and bubble viscosity, 32x32 no-slip",
  "command": "spectrum",
  "problem": {"dim": 2, "n": 32, "bc": "noslip", "kind": "constant", "seed": 1},
  "spectrum": {"which": ["M", "precondS"], "bins": 50},
  "sweep": {"problem.kind": ["constant", "bubble"]}
})"},
    {"constant-periodic-steady", R"({
  "name": "constant-periodic-steady",
  "description": "Constant-coefficient steady periodic Stokes with P1 and exact subsolvers",
  "command": "run",
  "problem": {"dim": 2, "n": 64, "bc": "periodic", "kind": "constant", "seed": 1},
  "solver": {"precond": "P1", "exact_subsolvers": true, "gmres": {"restart": 10, "max_iters": 20, "rtol": 1e-9}}
})"},
    {"bubble-2d", R"({
  "name": "bubble-2d",
  "description": "Steady bubble, contrast 100, P2 with one V-cycle per subsolve, restart 10",
  "command": "run",
  "problem": {"dim": 2, "n": 128, "bc": "noslip", "kind": "bubble", "seed": 1},
  "solver": {"precond": "P2", "gmres": {"restart": 10, "max_iters": 200, "rtol": 1e-10}},
  "full_size": {"problem": {"n": 512}}
})"},
};

}  // namespace

std::vector<std::pair<std::string, std::string>> preset_list() {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : kPresets) {
        const json j = json::parse(p.text);
        out.emplace_back(p.name, j.value("description", ""));
    }
    return out;
}

json preset_config(const std::string& name) {
    for (const auto& p : kPresets) {
        if (name == p.name) return json::parse(p.text);
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace stokes
