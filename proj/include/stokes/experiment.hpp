#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "stokes/krylov.hpp"
#include "stokes/problems.hpp"
#include "stokes/spectrum.hpp"

namespace stokes {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Thrown for malformed or inconsistent configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { Run, MgBench, Spectrum };

std::string to_string(Command c);

struct ProblemConfig {
    GridSpec grid;
    std::string kind = "constant";  // constant | bubble
    double mu0 = 1.0;
    double rho0 = 1.0;
    double gamma0 = 0.0;
    ViscousForm form = ViscousForm::Stress;
    CflSpec cfl;                    // default: steady
    std::optional<double> theta;    // overrides cfl when set
    BubbleSpec bubble;
    std::uint64_t seed = 1;
    bool rescale = true;

    double resolved_theta() const;
    CoefficientSet coefficients() const;
};

struct MgBenchConfig {
    std::vector<std::string> targets{"pressure", "velocity"};
    std::vector<int> sweeps{2};
    int cycles = 15;
    bool zero_rhs = false;
};

struct SpectrumConfig {
    std::vector<SpectrumWhich> which{SpectrumWhich::M, SpectrumWhich::PrecondS};
    SpectrumOptions options;
    bool write_eigenvalues = true;
};

/// One fully resolved sweep point.
struct RunSpec {
    std::string label;
    json params;  // swept values for this point
    json config;  // full resolved config tree
    ProblemConfig problem;
    PrecondConfig precond;
    GmresConfig gmres;
    MgBenchConfig mg;
    SpectrumConfig spectrum;
};

struct Experiment {
    std::string name;
    Command command = Command::Run;
    json config;
    std::vector<RunSpec> runs;
};

/// Names and one-line descriptions of the shipped presets.
std::vector<std::pair<std::string, std::string>> preset_list();
/// Preset config tree. Throws ConfigError for an unknown name.
json preset_config(const std::string& name);

/// Applies the `full_size` override block when requested, the seed override,
/// expands the sweep block, and validates every point. Throws ConfigError.
Experiment build_experiment(json config, Command command, std::optional<std::uint64_t> seed_override,
                            bool full_size);

/// Deep-merges `patch` into `base` (objects merged, everything else replaced).
void merge_json(json& base, const json& patch);
/// Sets a dotted path, creating intermediate objects.
void set_path(json& tree, const std::string& dotted, const json& value);

struct RunOutcome {
    std::string label;
    json params;
    std::vector<std::string> files;
    json summary;
    bool ok = true;
    double wall_seconds = 0.0;
};

/// Executes one sweep point, writing its files into `dir`.
RunOutcome execute_run(const Experiment& exp, const RunSpec& run, const std::filesystem::path& dir);

/// Runs all sweep points on `jobs` workers and writes the manifest last.
/// Returns the process exit code (0 all converged, 1 otherwise).
int execute_experiment(const Experiment& exp, const std::filesystem::path& out_dir, int jobs);

// Output helpers.
std::string history_csv(const ConvergenceHistory& h);
json spectrum_json(const SpectrumReport& rep, bool with_eigenvalues);
/// Writes through a temporary file and renames into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace stokes
