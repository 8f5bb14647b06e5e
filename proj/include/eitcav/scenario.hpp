#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eitcav/continuation.hpp"
#include "eitcav/fluctuations.hpp"
#include "eitcav/model.hpp"
#include "eitcav/oracles.hpp"
#include "eitcav/types.hpp"

namespace eitcav {

enum class ScenarioKind {
    Steady,
    ScanCavity,
    ScanInput,
    Spectra,
    Qnd,
    SqueezingScan,  ///< best squeezing vs detuning at fixed frequency
};

/// Inclusive linear grid "lo:hi:count".
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
    std::vector<double> points() const;
};

/// One run of the simulator: exactly one scenario kind, a parameter block
/// and the grids it needs. Built from a flat key=value config file plus
/// command-line overrides, or from a figure preset.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Steady;
    ModelParams params;
    double intensity_y = 0.95;
    std::optional<GridSpec> y_grid;
    std::optional<GridSpec> theta_grid;
    GridSpec omega_grid{0.0, 5.0, 501};
    double omega_fixed = 0.0;  ///< SqueezingScan only
    std::string branch = "auto";
    int meter_field = 1;
    bool allow_bad_cavity = false;
    std::string out_dir = "out";
    std::string label;  ///< artifact file stem; defaults from the kind
};

/// Parses the flat key=value format. Accepted keys: epsilon, cooperativity,
/// gamma_over_kappa, theta1, theta2, Y, y_grid, theta_grid, omega_grid,
/// scenario, branch, meter_field, allow_bad_cavity, out_dir. '#' starts a
/// comment. Unknown keys are rejected.
ScenarioConfig parse_config_text(const std::string& text);

/// Applies one key=value override on top of an existing config.
void apply_config_key(ScenarioConfig& config, const std::string& key,
                      const std::string& value);

/// Figure presets: fig2, fig3-top, fig3-bottom, fig4, fig5-top, fig5-bottom.
ScenarioConfig preset_config(const std::string& name);

struct ArtifactInfo {
    std::string path;
    std::string sha256;
    long rows = 0;
};

struct SolverStats {
    long newton_iterations = 0;
    long retries = 0;
    int truncated_branches = 0;
};

struct ResultManifest {
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<ArtifactInfo> artifacts;
    SolverStats solver;
    std::vector<std::string> warnings;
};

/// Executes the configured computation, writes the CSV artifact(s) and the
/// JSON manifest under config.out_dir, and returns the manifest. Output is
/// bit-deterministic for identical configs.
ResultManifest run_scenario(const ScenarioConfig& config);

/// Writes rows with the given header; floats must already be serialized.
void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows);

/// Shortest-exact serialization with 17 significant digits.
std::string format_float(double value);

std::string manifest_to_json(const ResultManifest& manifest);

/// Cross-checks the numeric pipeline against every closed form, at the
/// reference parameters. All deviations are expected below 1e-8.
std::vector<oracle::OracleReport> run_verification();

bool verification_passed(const std::vector<oracle::OracleReport>& reports,
                         double tolerance = 1e-8);

}  // namespace eitcav
