#include "eitcav/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "eitcav/sha256.hpp"

namespace eitcav {

namespace {

using nlohmann::ordered_json;

std::string trim(const std::string& text) {
    const auto begin = text.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = text.find_last_not_of(" \t\r\n");
    return text.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" +
                          value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: key '" + key + "' expects a boolean, got '" +
                      value + "'");
}

GridSpec parse_grid(const std::string& key, const std::string& value) {
    GridSpec grid;
    const auto first = value.find(':');
    const auto second = value.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        throw ConfigError("config: key '" + key + "' expects lo:hi:count, got '" +
                          value + "'");
    grid.lo = parse_double(key, value.substr(0, first));
    grid.hi = parse_double(key, value.substr(first + 1, second - first - 1));
    const double count = parse_double(key, value.substr(second + 1));
    grid.count = static_cast<int>(count);
    if (grid.count != count || grid.count < 1)
        throw ConfigError("config: key '" + key + "' needs a positive integer count");
    return grid;
}

std::string grid_to_string(const GridSpec& grid) {
    return format_float(grid.lo) + ":" + format_float(grid.hi) + ":" +
           std::to_string(grid.count);
}

ScenarioKind parse_kind(const std::string& value) {
    if (value == "steady") return ScenarioKind::Steady;
    if (value == "scan-cavity") return ScenarioKind::ScanCavity;
    if (value == "scan-input") return ScenarioKind::ScanInput;
    if (value == "spectra") return ScenarioKind::Spectra;
    if (value == "qnd") return ScenarioKind::Qnd;
    throw ConfigError("config: unknown scenario '" + value + "'");
}

std::string kind_to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Steady: return "steady";
        case ScenarioKind::ScanCavity: return "scan-cavity";
        case ScenarioKind::ScanInput: return "scan-input";
        case ScenarioKind::Spectra: return "spectra";
        case ScenarioKind::Qnd: return "qnd";
        case ScenarioKind::SqueezingScan: return "squeezing-scan";
    }
    return "steady";
}

std::string default_label(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::Steady: return "steady";
        case ScenarioKind::ScanCavity: return "scan_cavity";
        case ScenarioKind::ScanInput: return "scan_input";
        case ScenarioKind::Spectra: return "spectra";
        case ScenarioKind::Qnd: return "qnd";
        case ScenarioKind::SqueezingScan: return "squeezing_scan";
    }
    return "scenario";
}

std::optional<BranchLabel> branch_from_string(const std::string& name) {
    if (name == "symmetric-plus") return BranchLabel::SymmetricPlus;
    if (name == "symmetric-minus") return BranchLabel::SymmetricMinus;
    if (name == "symmetric-low") return BranchLabel::SymmetricLow;
    if (name == "asymmetric-a") return BranchLabel::AsymmetricA;
    if (name == "asymmetric-b") return BranchLabel::AsymmetricB;
    return std::nullopt;
}

DriveSpec drive_for_state(const SteadyState& state, double intensity_y) {
    return DriveSpec{intensity_y, state.phi1_in, state.phi2_in};
}

struct OperatingPoint {
    ModelParams params;  ///< with the requested detunings applied
    DriveSpec drive;
    SteadyState state;
    DriftMatrix drift;
};

/// Resolves the branch selection at the requested drive and detunings.
OperatingPoint select_operating_state(const ScenarioConfig& config,
                                      SolverStats* stats) {
    ModelParams resonant = config.params;
    resonant.theta1 = 0.0;
    resonant.theta2 = 0.0;
    const auto seeds = analytic_steady_theta0(config.intensity_y, resonant);

    std::optional<BranchLabel> wanted;
    if (config.branch != "auto") {
        wanted = branch_from_string(config.branch);
        if (!wanted) throw ConfigError("unknown branch '" + config.branch + "'");
        if (*wanted == BranchLabel::SymmetricLow)
            throw ConfigError(
                "the approximate low branch is excluded from fluctuation "
                "analysis");
    } else {
        wanted = (config.intensity_y < 1.0) ? BranchLabel::AsymmetricA
                                            : BranchLabel::SymmetricPlus;
    }

    const SteadyState* seed = nullptr;
    for (const SteadyState& s : seeds)
        if (s.branch == *wanted && !s.approximate) seed = &s;
    if (!seed)
        throw ConfigError("branch '" + config.branch + "' does not exist at Y = " +
                          format_float(config.intensity_y));

    OperatingPoint point;
    point.params = config.params;
    point.drive = drive_for_state(*seed, config.intensity_y);
    NewtonStats newton;
    point.state = continue_to_detuning(config.params, point.drive, *seed,
                                       config.params.theta1,
                                       config.params.theta2, &newton);
    if (stats) stats->newton_iterations += newton.iterations;
    point.drift = drift_matrix(point.state, point.params);
    return point;
}

std::string stability_cell(const SteadyState& state) {
    return to_string(state.stability);
}

void echo_common(const ScenarioConfig& config, ResultManifest& manifest) {
    auto& echo = manifest.config_echo;
    echo.emplace_back("scenario", kind_to_string(config.kind));
    echo.emplace_back("label", config.label);
    echo.emplace_back("epsilon", format_float(config.params.epsilon));
    echo.emplace_back("cooperativity", format_float(config.params.cooperativity));
    echo.emplace_back("gamma_over_kappa",
                      format_float(config.params.gamma_over_kappa));
    echo.emplace_back("theta1", format_float(config.params.theta1));
    echo.emplace_back("theta2", format_float(config.params.theta2));
    echo.emplace_back("Y", format_float(config.intensity_y));
    if (config.y_grid) echo.emplace_back("y_grid", grid_to_string(*config.y_grid));
    if (config.theta_grid)
        echo.emplace_back("theta_grid", grid_to_string(*config.theta_grid));
    echo.emplace_back("omega_grid", grid_to_string(config.omega_grid));
    if (config.kind == ScenarioKind::SqueezingScan)
        echo.emplace_back("omega", format_float(config.omega_fixed));
    echo.emplace_back("branch", config.branch);
    echo.emplace_back("meter_field", std::to_string(config.meter_field));
    echo.emplace_back("allow_bad_cavity",
                      config.allow_bad_cavity ? "true" : "false");
    echo.emplace_back("out_dir", config.out_dir);
}

ArtifactInfo write_artifact(const std::string& out_dir, const std::string& stem,
                            const std::vector<std::string>& header,
                            const std::vector<std::vector<std::string>>& rows) {
    const std::string path =
        (std::filesystem::path(out_dir) / (stem + ".csv")).string();
    emit_csv(path, header, rows);
    ArtifactInfo info;
    info.path = stem + ".csv";  // relative to the manifest
    info.sha256 = sha256_file(path);
    info.rows = static_cast<long>(rows.size());
    return info;
}

void collect_branch_stats(const std::vector<Branch>& branches,
                          ResultManifest& manifest) {
    for (const Branch& branch : branches) {
        manifest.solver.newton_iterations += branch.newton_iterations;
        manifest.solver.retries += branch.retries;
        if (branch.truncated_low || branch.truncated_high) {
            ++manifest.solver.truncated_branches;
            manifest.warnings.push_back("branch " + to_string(branch.label) +
                                        " truncated: " + branch.truncation_reason);
        }
    }
}

/// Emits scan rows in grid order, branches in their deterministic order
/// within each grid point.
std::vector<std::vector<std::string>> scan_rows(
    const std::vector<Branch>& branches, const std::vector<double>& grid,
    bool parameter_first) {
    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> cursor(branches.size(), 0);
    for (double value : grid) {
        for (size_t b = 0; b < branches.size(); ++b) {
            const Branch& branch = branches[b];
            size_t& at = cursor[b];
            if (at >= branch.parameters.size() || branch.parameters[at] != value)
                continue;
            const SteadyState& state = branch.states[at];
            ++at;
            std::vector<std::string> row;
            if (parameter_first) {
                row = {format_float(value), to_string(branch.label),
                       format_float(state.i1), format_float(state.i2),
                       stability_cell(state)};
            } else {
                row = {format_float(value), format_float(state.i1),
                       format_float(state.i2), to_string(branch.label),
                       stability_cell(state)};
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

void run_steady(const ScenarioConfig& config, ResultManifest& manifest) {
    ModelParams resonant = config.params;
    resonant.theta1 = 0.0;
    resonant.theta2 = 0.0;
    const auto seeds = analytic_steady_theta0(config.intensity_y, resonant);
    std::vector<SteadyState> states;
    for (const SteadyState& seed : seeds) {
        if (seed.approximate) {
            SteadyState low = seed;
            low.stability =
                classify_stability(drift_matrix(low, config.params));
            states.push_back(low);
            manifest.warnings.push_back(
                "symmetric_low is the dominant-balance approximation, not an "
                "exact root");
            continue;
        }
        try {
            NewtonStats newton;
            states.push_back(continue_to_detuning(
                config.params, drive_for_state(seed, config.intensity_y), seed,
                config.params.theta1, config.params.theta2, &newton));
            manifest.solver.newton_iterations += newton.iterations;
        } catch (const NoConvergence&) {
            ++manifest.solver.truncated_branches;
            manifest.warnings.push_back("branch " + to_string(seed.branch) +
                                        " lost before reaching the requested "
                                        "detunings");
        }
    }
    std::vector<std::vector<std::string>> rows;
    for (const SteadyState& s : states) {
        rows.push_back({to_string(s.branch), format_float(s.i1),
                        format_float(s.i2), format_float(s.x1.real()),
                        format_float(s.x2.real()), format_float(s.phi1_in),
                        format_float(s.phi2_in), format_float(s.phi1_out),
                        format_float(s.phi2_out), stability_cell(s)});
    }
    manifest.artifacts.push_back(write_artifact(
        config.out_dir, config.label,
        {"branch", "I1", "I2", "x1", "x2", "phi1_in", "phi2_in", "phi1_out",
         "phi2_out", "stable"},
        rows));
}

void run_scan_cavity(const ScenarioConfig& config, ResultManifest& manifest) {
    if (!config.theta_grid)
        throw ConfigError("scan-cavity requires theta_grid");
    const auto grid = config.theta_grid->points();
    const DriveSpec drive{config.intensity_y, 0.0, 0.0};
    const auto branches = sweep_cavity_scan(config.params, drive, grid);
    collect_branch_stats(branches, manifest);
    manifest.artifacts.push_back(
        write_artifact(config.out_dir, config.label,
                       {"theta", "branch", "I1", "I2", "stable"},
                       scan_rows(branches, grid, /*parameter_first=*/true)));
}

void run_scan_input(const ScenarioConfig& config, ResultManifest& manifest) {
    if (!config.y_grid) throw ConfigError("scan-input requires y_grid");
    const auto grid = config.y_grid->points();
    const auto branches = sweep_input_intensity(config.params, grid);
    collect_branch_stats(branches, manifest);
    if (std::any_of(grid.begin(), grid.end(), [](double y) { return y <= 0.0; }))
        manifest.warnings.push_back(
            "grid points with Y <= 0 carry no steady states and emit no rows");
    manifest.artifacts.push_back(
        write_artifact(config.out_dir, config.label,
                       {"Y", "I1", "I2", "branch", "stable"},
                       scan_rows(branches, grid, /*parameter_first=*/false)));
}

SpectraResult collect_spectra(const OperatingPoint& point,
                              const std::vector<double>& omegas) {
    SpectraResult result;
    result.omega = omegas;
    for (double omega : omegas) {
        for (int field : {1, 2}) {
            const BestSqueezing best =
                best_squeezing(point.state, point.drift, field, omega);
            const double amp = squeezing_spectrum(point.state, point.drift,
                                                  QuadratureSpec{field, 0.0}, omega);
            result.s_best[field - 1].push_back(best.value);
            result.phi_best[field - 1].push_back(best.phase);
            result.s_amp[field - 1].push_back(amp);
        }
    }
    return result;
}

SpectraResult collect_qnd(const OperatingPoint& point, const QndRoles& roles,
                          const std::vector<double>& omegas) {
    SpectraResult result;
    result.omega = omegas;
    for (double omega : omegas) {
        const QndCoefficients qnd =
            qnd_coefficients(point.state, point.drift, roles, omega);
        result.cs.push_back(qnd.cs);
        result.cm.push_back(qnd.cm);
        result.vsm.push_back(qnd.vsm);
    }
    return result;
}

void run_spectra(const ScenarioConfig& config, ResultManifest& manifest) {
    require_adiabatic(config.params, config.allow_bad_cavity);
    const OperatingPoint point = select_operating_state(config, &manifest.solver);
    const SpectraResult result =
        collect_spectra(point, config.omega_grid.points());
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < result.omega.size(); ++i)
        for (int field : {1, 2})
            rows.push_back({format_float(result.omega[i]), std::to_string(field),
                            format_float(result.phi_best[field - 1][i]),
                            format_float(result.s_best[field - 1][i]),
                            format_float(result.s_amp[field - 1][i])});
    manifest.artifacts.push_back(write_artifact(
        config.out_dir, config.label,
        {"omega", "field", "phi_star", "S_best", "S_amp"}, rows));
}

void run_qnd(const ScenarioConfig& config, ResultManifest& manifest) {
    require_adiabatic(config.params, config.allow_bad_cavity);
    if (config.meter_field != 1 && config.meter_field != 2)
        throw ConfigError("meter_field must be 1 or 2");
    const OperatingPoint point = select_operating_state(config, &manifest.solver);
    const QndRoles roles{config.meter_field, config.meter_field == 1 ? 2 : 1};
    const SpectraResult result = collect_qnd(point, roles,
                                             config.omega_grid.points());
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < result.omega.size(); ++i)
        rows.push_back({format_float(result.omega[i]), format_float(result.cs[i]),
                        format_float(result.cm[i]), format_float(result.vsm[i])});
    manifest.artifacts.push_back(write_artifact(
        config.out_dir, config.label, {"omega", "Cs", "Cm", "Vsm"}, rows));
}

void run_squeezing_scan(const ScenarioConfig& config, ResultManifest& manifest) {
    require_adiabatic(config.params, config.allow_bad_cavity);
    if (!config.theta_grid)
        throw ConfigError("squeezing-scan requires theta_grid");
    const auto grid = config.theta_grid->points();
    const DriveSpec drive{config.intensity_y, 0.0, 0.0};
    const auto branches = sweep_cavity_scan(config.params, drive, grid);
    collect_branch_stats(branches, manifest);

    std::vector<std::vector<std::string>> rows;
    std::vector<size_t> cursor(branches.size(), 0);
    long skipped = 0;
    for (double theta : grid) {
        const SteadyState* stable = nullptr;
        for (size_t b = 0; b < branches.size() && !stable; ++b) {
            size_t& at = cursor[b];
            if (at < branches[b].parameters.size() &&
                branches[b].parameters[at] == theta) {
                if (branches[b].states[at].stability == Stability::Stable)
                    stable = &branches[b].states[at];
                ++at;
            }
        }
        if (!stable) {
            ++skipped;
            continue;
        }
        ModelParams local = config.params;
        local.theta1 = local.theta2 = theta;
        const DriftMatrix drift = drift_matrix(*stable, local);
        for (int field : {1, 2}) {
            const BestSqueezing best =
                best_squeezing(*stable, drift, field, config.omega_fixed);
            const double amp =
                squeezing_spectrum(*stable, drift, QuadratureSpec{field, 0.0},
                                   config.omega_fixed);
            rows.push_back({format_float(theta), std::to_string(field),
                            format_float(best.phase), format_float(best.value),
                            format_float(amp)});
        }
    }
    if (skipped > 0)
        manifest.warnings.push_back(std::to_string(skipped) +
                                    " scan points had no stable state");
    manifest.artifacts.push_back(write_artifact(
        config.out_dir, config.label,
        {"theta", "field", "phi_star", "S_best", "S_amp"}, rows));
}

}  // namespace

std::vector<double> GridSpec::points() const {
    if (count < 1) throw ConfigError("grid count must be >= 1");
    if (count == 1) {
        if (lo != hi) throw ConfigError("single-point grid needs lo == hi");
        return {lo};
    }
    if (!(hi > lo)) throw ConfigError("grid needs hi > lo");
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = lo + (hi - lo) * double(i) / double(count - 1);
    return grid;
}

void apply_config_key(ScenarioConfig& config, const std::string& key,
                      const std::string& value) {
    if (key == "epsilon")
        config.params.epsilon = parse_double(key, value);
    else if (key == "cooperativity")
        config.params.cooperativity = parse_double(key, value);
    else if (key == "gamma_over_kappa")
        config.params.gamma_over_kappa = parse_double(key, value);
    else if (key == "theta1")
        config.params.theta1 = parse_double(key, value);
    else if (key == "theta2")
        config.params.theta2 = parse_double(key, value);
    else if (key == "Y")
        config.intensity_y = parse_double(key, value);
    else if (key == "y_grid")
        config.y_grid = parse_grid(key, value);
    else if (key == "theta_grid")
        config.theta_grid = parse_grid(key, value);
    else if (key == "omega_grid")
        config.omega_grid = parse_grid(key, value);
    else if (key == "scenario")
        config.kind = parse_kind(value);
    else if (key == "branch")
        config.branch = value;
    else if (key == "meter_field")
        config.meter_field = static_cast<int>(parse_double(key, value));
    else if (key == "allow_bad_cavity")
        config.allow_bad_cavity = parse_bool(key, value);
    else if (key == "out_dir")
        config.out_dir = value;
    else
        throw ConfigError("config: unknown key '" + key + "'");
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig config;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto equals = line.find('=');
        if (equals == std::string::npos)
            throw ConfigError("config: expected key = value, got '" + line + "'");
        apply_config_key(config, trim(line.substr(0, equals)),
                         trim(line.substr(equals + 1)));
    }
    return config;
}

ScenarioConfig preset_config(const std::string& name) {
    ScenarioConfig config;  // reference parameter block
    config.params.epsilon = 0.0625;
    config.params.cooperativity = 250.0;
    config.params.gamma_over_kappa = 10.0;
    if (name == "fig2") {
        config.kind = ScenarioKind::ScanInput;
        config.y_grid = GridSpec{0.0, 2.0, 2001};
        config.label = "fig2";
    } else if (name == "fig3-top") {
        // range framing the dispersively shifted resonances (peaks near
        // theta = -/+0.355) and, below the fold, the stability exchange
        config.kind = ScenarioKind::ScanCavity;
        config.intensity_y = 1.05;
        config.theta_grid = GridSpec{-1.0, 1.0, 2001};
        config.label = "fig3_top";
    } else if (name == "fig3-bottom") {
        config.kind = ScenarioKind::ScanCavity;
        config.intensity_y = 0.95;
        config.theta_grid = GridSpec{-1.0, 1.0, 2001};
        config.label = "fig3_bottom";
    } else if (name == "fig4") {
        config.kind = ScenarioKind::SqueezingScan;
        config.intensity_y = 1.05;
        config.theta_grid = GridSpec{-1.0, 1.0, 2001};
        config.omega_fixed = 0.0;
        config.label = "fig4";
    } else if (name == "fig5-top") {
        config.kind = ScenarioKind::Spectra;
        config.intensity_y = 1.05;
        config.params.theta1 = config.params.theta2 = 0.0013;
        config.omega_grid = GridSpec{0.0, 5.0, 501};
        config.label = "fig5_top";
    } else if (name == "fig5-bottom") {
        config.kind = ScenarioKind::Qnd;
        config.intensity_y = 0.95;
        config.params.theta1 = config.params.theta2 = 0.0018;
        config.omega_grid = GridSpec{0.0, 5.0, 501};
        config.meter_field = 1;
        config.label = "fig5_bottom";
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return config;
}

std::string format_float(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::ios_base::failure("emit_csv: cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i)
        file << (i ? "," : "") << header[i];
    file << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            file << (i ? "," : "") << row[i];
        file << '\n';
    }
    if (!file.flush())
        throw std::ios_base::failure("emit_csv: write failed for " + path);
}

std::string manifest_to_json(const ResultManifest& manifest) {
    ordered_json root;
    ordered_json config = ordered_json::object();
    for (const auto& [key, value] : manifest.config_echo) config[key] = value;
    root["config"] = config;
    root["artifacts"] = ordered_json::array();
    for (const ArtifactInfo& artifact : manifest.artifacts)
        root["artifacts"].push_back({{"path", artifact.path},
                                     {"sha256", artifact.sha256},
                                     {"rows", artifact.rows}});
    root["solver"] = {{"newton_iterations", manifest.solver.newton_iterations},
                      {"retries", manifest.solver.retries},
                      {"truncated_branches", manifest.solver.truncated_branches}};
    root["warnings"] = manifest.warnings;
    return root.dump(2) + "\n";
}

ResultManifest run_scenario(const ScenarioConfig& config_in) {
    ScenarioConfig config = config_in;
    if (config.label.empty()) config.label = default_label(config.kind);
    validate(config.params);
    if (config.intensity_y < 0.0) throw ConfigError("Y must be >= 0");

    std::filesystem::create_directories(config.out_dir);
    ResultManifest manifest;
    echo_common(config, manifest);
    for (const std::string& warning : validity_warnings(config.params))
        manifest.warnings.push_back(warning);

    switch (config.kind) {
        case ScenarioKind::Steady: run_steady(config, manifest); break;
        case ScenarioKind::ScanCavity: run_scan_cavity(config, manifest); break;
        case ScenarioKind::ScanInput: run_scan_input(config, manifest); break;
        case ScenarioKind::Spectra: run_spectra(config, manifest); break;
        case ScenarioKind::Qnd: run_qnd(config, manifest); break;
        case ScenarioKind::SqueezingScan:
            run_squeezing_scan(config, manifest);
            break;
    }

    const std::string manifest_path =
        (std::filesystem::path(config.out_dir) / (config.label + "_manifest.json"))
            .string();
    std::ofstream file(manifest_path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw std::ios_base::failure("run_scenario: cannot open " + manifest_path);
    file << manifest_to_json(manifest);
    if (!file.flush())
        throw std::ios_base::failure("run_scenario: write failed for " +
                                     manifest_path);
    return manifest;
}

std::vector<oracle::OracleReport> run_verification() {
    using oracle::make_report;
    std::vector<oracle::OracleReport> reports;

    ModelParams params;
    params.epsilon = 0.0625;
    params.cooperativity = 250.0;
    params.gamma_over_kappa = 10.0;

    // steady states from deliberately rough seeds
    {
        const auto oracle = oracle::oracle_steady(0.95);
        auto seeds = analytic_steady_theta0(0.95, params);
        SteadyState rough = seeds[1];
        rough.x1 *= 1.07;
        rough.x2 *= 0.93;
        const SteadyState solved =
            solve_steady(params, drive_for_state(seeds[1], 0.95), rough);
        reports.push_back(make_report("steady.I1 (Y=0.95)", oracle.i_high,
                                      solved.i1,
                                      "universal intensity pair below the fold"));
        reports.push_back(make_report("steady.I2 (Y=0.95)", oracle.i_low,
                                      solved.i2,
                                      "universal intensity pair below the fold"));
    }
    {
        const auto oracle = oracle::oracle_steady(1.05);
        auto seeds = analytic_steady_theta0(1.05, params);
        for (int which : {0, 1}) {
            SteadyState rough = seeds[which];
            rough.x1 *= 1.04;
            rough.x2 *= 1.04;
            const SteadyState solved = solve_steady(
                params, drive_for_state(seeds[which], 1.05), rough);
            reports.push_back(make_report(
                which == 0 ? "steady.I+ (Y=1.05)" : "steady.I- (Y=1.05)",
                which == 0 ? oracle.i_high : oracle.i_low, solved.i1,
                "symmetric branch relation above the fold"));
        }
    }
    {
        const FoldPoint fold = find_turning_point(params);
        reports.push_back(
            make_report("fold.Y*", 1.0, fold.y_critical, "fold condition"));
        // the mean of the two symmetric roots just above the fold cancels
        // the square-root defect of a single near-fold solve
        const double y_probe = fold.y_critical + 1e-9;
        const auto seeds = analytic_steady_theta0(y_probe, params);
        double mean_intensity = 0.0;
        for (int which : {0, 1}) {
            const SteadyState solved = solve_steady(
                params, drive_for_state(seeds[which], y_probe), seeds[which]);
            mean_intensity += 0.25 * (solved.i1 + solved.i2);
        }
        reports.push_back(
            make_report("fold.I", 0.5, mean_intensity, "fold condition"));
    }
    {
        const auto oracle = oracle::oracle_steady(1.05);
        const auto states = analytic_steady_theta0(1.05, params);
        const double max_plus =
            drift_eigenvalues(drift_matrix(states[0], params)).real().maxCoeff();
        const double max_minus =
            drift_eigenvalues(drift_matrix(states[1], params)).real().maxCoeff();
        reports.push_back(make_report("drift.lambda_max (plus)",
                                      -1.0 + 0.5 / oracle.i_high, max_plus,
                                      "two-photon drift eigenvalues"));
        reports.push_back(make_report("drift.lambda_max (minus)",
                                      -1.0 + 0.5 / oracle.i_low, max_minus,
                                      "two-photon drift eigenvalues"));
    }
    {
        const auto oracle = oracle::oracle_steady(1.05);
        SteadyState plus = analytic_steady_theta0(1.05, params)[0];
        DriftMatrix drift = drift_matrix(plus, params);
        plus.stability = classify_stability(drift);
        drift.state = plus;
        const BestSqueezing at_zero = best_squeezing(plus, drift, 1, 0.0);
        reports.push_back(make_report("squeezing.best (Y=1.05, w=0)",
                                      oracle::oracle_sbest(oracle.i_high, 0.0),
                                      at_zero.value,
                                      "best squeezing closed form"));
        double max_dev = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double omega = 5.0 * i / 100.0;
            const BestSqueezing best = best_squeezing(plus, drift, 1, omega);
            max_dev = std::max(max_dev,
                               std::abs(best.value - oracle::oracle_sbest(
                                                         oracle.i_high, omega)));
        }
        reports.push_back(make_report("squeezing.max_dev (w in [0,5])", 0.0,
                                      max_dev, "best squeezing closed form"));
        reports.push_back(make_report("squeezing.uncertainty_product", 1.0,
                                      at_zero.value * at_zero.worst_value,
                                      "minimum uncertainty product"));
    }
    {
        SteadyState asym = analytic_steady_theta0(0.95, params)[1];
        DriftMatrix drift = drift_matrix(asym, params);
        asym.stability = classify_stability(drift);
        drift.state = asym;
        const auto oracle = oracle::oracle_qnd_zero_freq(0.95);
        const double s_int =
            squeezing_spectrum(asym, drift, QuadratureSpec{1, 0.0}, 0.0);
        const double s_phase =
            squeezing_spectrum(asym, drift, QuadratureSpec{1, M_PI / 2.0}, 0.0);
        const QndCoefficients qnd =
            qnd_coefficients(asym, drift, QndRoles{1, 2}, 0.0);
        reports.push_back(make_report("qnd.S_int (Y=0.95, w=0)",
                                      oracle.s_intensity, s_int,
                                      "zero-frequency quadrature spectra"));
        reports.push_back(make_report("qnd.S_phase (Y=0.95, w=0)", oracle.s_phase,
                                      s_phase,
                                      "zero-frequency quadrature spectra"));
        reports.push_back(make_report("qnd.V_sm (Y=0.95, w=0)", oracle.v_sm,
                                      qnd.vsm,
                                      "zero-frequency conditional variance"));
    }
    for (double y : {0.8, 0.9, 0.99}) {
        SteadyState asym = analytic_steady_theta0(y, params)[1];
        DriftMatrix drift = drift_matrix(asym, params);
        asym.stability = classify_stability(drift);
        drift.state = asym;
        const QndCoefficients qnd =
            qnd_coefficients(asym, drift, QndRoles{1, 2}, 0.0);
        char label[64];
        std::snprintf(label, sizeof(label), "qnd.V_sm (Y=%.4g, w=0)", y);
        reports.push_back(make_report(label, oracle::oracle_qnd_zero_freq(y).v_sm,
                                      qnd.vsm,
                                      "zero-frequency conditional variance"));
    }
    return reports;
}

bool verification_passed(const std::vector<oracle::OracleReport>& reports,
                         double tolerance) {
    return std::all_of(reports.begin(), reports.end(),
                       [tolerance](const oracle::OracleReport& report) {
                           return std::isfinite(report.abs_deviation) &&
                                  report.abs_deviation <= tolerance;
                       });
}

}  // namespace eitcav
