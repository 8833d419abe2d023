#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "stokes/experiment.hpp"

namespace {

struct Options {
    std::string config;
    std::string preset;
    std::string out;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    bool full_size = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config, "JSON config file");
    cmd->add_option("--preset", o.preset, "Shipped preset name (see `presets list`)");
    cmd->add_option("--out", o.out, "Output directory (default $STOKES_OUT_DIR or ./out)");
    cmd->add_option("--jobs", o.jobs, "Parallel sweep points")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "Override problem.seed");
    cmd->add_flag("--full-size", o.full_size, "Apply the config's full_size block");
}

int dispatch(stokes::Command command, const Options& o) {
    using stokes::ConfigError;
    stokes::Experiment exp;
    try {
        if (o.config.empty() == o.preset.empty()) throw ConfigError("give exactly one of --config or --preset");
        stokes::json cfg;
        if (!o.preset.empty()) {
            cfg = stokes::preset_config(o.preset);
        } else {
            std::ifstream in(o.config);
            if (!in) throw ConfigError("cannot read config file '" + o.config + "'");
            try {
                cfg = stokes::json::parse(in);
            } catch (const stokes::json::exception& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
        }
        exp = stokes::build_experiment(cfg, command, o.seed, o.full_size);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::string out = o.out;
    if (out.empty()) {
        const char* env = std::getenv("STOKES_OUT_DIR");
        out = env && *env ? env : "out";
    }
    try {
        const int code = stokes::execute_experiment(exp, out, o.jobs);
        std::cerr << exp.name << ": " << exp.runs.size() << " run(s) written to " << (std::filesystem::path(out) / exp.name).string()
                  << (code == 0 ? "" : " (some runs did not converge)") << "\n";
        return code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-coefficient Stokes solver and benchmark driver"};
    app.require_subcommand(1);
    Options o;
    auto* run = app.add_subcommand("run", "Solve with GMRES and write convergence histories");
    auto* mg = app.add_subcommand("mg-bench", "Multigrid residual per V-cycle");
    auto* spec = app.add_subcommand("spectrum", "Dense eigenvalue analysis on small grids");
    for (auto* c : {run, mg, spec}) add_common(c, o);
    auto* presets = app.add_subcommand("presets", "Shipped experiment presets");
    presets->require_subcommand(1);
    auto* list = presets->add_subcommand("list", "List preset names");
    std::string show_name;
    auto* show = presets->add_subcommand("show", "Print a preset's config");
    show->add_option("name", show_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*list) {
        for (const auto& [name, desc] : stokes::preset_list()) std::cout << name << "\t" << desc << "\n";
        return 0;
    }
    if (*show) {
        try {
            std::cout << stokes::preset_config(show_name).dump(2) << "\n";
            return 0;
        } catch (const stokes::ConfigError& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    if (*run) return dispatch(stokes::Command::Run, o);
    if (*mg) return dispatch(stokes::Command::MgBench, o);
    return dispatch(stokes::Command::Spectrum, o);
}
