#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eitcav/scenario.hpp"

namespace {

using namespace eitcav;

constexpr const char* kUnitsFooter =
    "Units: cavity detunings theta and fluctuation frequencies omega are in "
    "units of the cavity linewidth kappa; the atomic detuning epsilon is in "
    "units of the optical-coherence decay rate; intracavity/input intensities "
    "I and Y are rescaled by 4*C*epsilon so the steady-state curve is "
    "universal. Spectra are normalized to shot noise (coherent beam = 1).\n"
    "Grids are written lo:hi:count (inclusive, linear).\n"
    "CSV schemas: steady -> branch,I1,I2,x1,x2,phi1_in,phi2_in,phi1_out,"
    "phi2_out,stable; scan-cavity -> theta,branch,I1,I2,stable; scan-input -> "
    "Y,I1,I2,branch,stable; spectra -> omega,field,phi_star,S_best,S_amp; "
    "qnd -> omega,Cs,Cm,Vsm; fig4 preset -> theta,field,phi_star,S_best,"
    "S_amp.\n"
    "Exit codes: 0 success, 2 configuration error, 3 no convergence / "
    "singular point, 4 I/O error.";

struct CliOverrides {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> keys;
};

void add_common_options(CLI::App* cmd, CliOverrides& overrides) {
    cmd->add_option("--config", overrides.config_path,
                    "flat key=value config file applied before other options");
    const auto track = [&overrides](const std::string& key) {
        return [&overrides, key](const std::string& value) {
            overrides.keys.emplace_back(key, value);
        };
    };
    cmd->add_option_function<std::string>("--epsilon", track("epsilon"),
                                          "atomic detuning epsilon > 0");
    cmd->add_option_function<std::string>("--cooperativity",
                                          track("cooperativity"),
                                          "cooperativity C > 0");
    cmd->add_option_function<std::string>(
        "--gamma-over-kappa", track("gamma_over_kappa"),
        "gamma/kappa ratio (good-cavity validity gate at 5)");
    cmd->add_option_function<std::string>("--theta1", track("theta1"),
                                          "cavity detuning of field 1");
    cmd->add_option_function<std::string>("--theta2", track("theta2"),
                                          "cavity detuning of field 2");
    cmd->add_option_function<std::string>("--Y", track("Y"),
                                          "rescaled input intensity");
    cmd->add_option_function<std::string>("--y-grid", track("y_grid"),
                                          "input intensity grid lo:hi:count");
    cmd->add_option_function<std::string>("--theta-grid", track("theta_grid"),
                                          "cavity detuning grid lo:hi:count");
    cmd->add_option_function<std::string>("--omega-grid", track("omega_grid"),
                                          "frequency grid lo:hi:count");
    cmd->add_option_function<std::string>(
        "--branch", track("branch"),
        "branch selection: auto, symmetric-plus, symmetric-minus, "
        "asymmetric-a, asymmetric-b");
    cmd->add_option_function<std::string>("--meter-field", track("meter_field"),
                                          "meter field (1 or 2)");
    cmd->add_option_function<std::string>(
        "--allow-bad-cavity", track("allow_bad_cavity"),
        "override the good-cavity validity gate (true/false)");
    cmd->add_option_function<std::string>("--out-dir", track("out_dir"),
                                          "artifact output directory");
}

ScenarioConfig build_config(const CliOverrides& overrides,
                            const std::string& scenario_name) {
    ScenarioConfig config;
    if (!overrides.config_path.empty()) {
        std::ifstream file(overrides.config_path);
        if (!file)
            throw std::ios_base::failure("cannot open config file " +
                                         overrides.config_path);
        std::ostringstream text;
        text << file.rdbuf();
        config = parse_config_text(text.str());
    }
    apply_config_key(config, "scenario", scenario_name);
    for (const auto& [key, value] : overrides.keys)
        apply_config_key(config, key, value);
    return config;
}

void report_manifest(const std::string& out_dir, const ResultManifest& manifest) {
    for (const ArtifactInfo& artifact : manifest.artifacts)
        std::cout << "wrote "
                  << (std::filesystem::path(out_dir) / artifact.path).string()
                  << " (" << artifact.rows << " rows, sha256 "
                  << artifact.sha256.substr(0, 12) << ")\n";
    for (const std::string& warning : manifest.warnings)
        std::cout << "warning: " << warning << "\n";
}

int run_verify() {
    const auto reports = run_verification();
    std::printf("%-28s %22s %22s %12s  %s\n", "quantity", "analytic", "numeric",
                "abs_dev", "formula");
    for (const auto& report : reports)
        std::printf("%-28s %22.15g %22.15g %12.3e  %s\n", report.quantity.c_str(),
                    report.analytic, report.numeric, report.abs_deviation,
                    report.formula.c_str());
    if (!verification_passed(reports)) {
        std::cerr << "verification FAILED: a deviation exceeds 1e-8\n";
        return 1;
    }
    std::cout << "verification passed: all deviations below 1e-8\n";
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{
        "eitcav - steady states, stability and quantum fluctuation spectra of "
        "two cavity fields dispersively coupled through a three-level medium"};
    app.footer(kUnitsFooter);
    app.require_subcommand(1);

    struct SubcommandSpec {
        const char* name;
        const char* help;
    };
    const SubcommandSpec scenarios[] = {
        {"steady", "all steady states at one drive and detuning"},
        {"scan-cavity", "branch continuation across a common-detuning scan"},
        {"scan-input", "branch structure across an input-intensity scan"},
        {"spectra", "squeezing spectra of the selected branch"},
        {"qnd", "meter/signal correlation coefficients vs frequency"},
    };
    std::vector<std::unique_ptr<CliOverrides>> overrides;
    std::vector<std::pair<CLI::App*, std::string>> runs;
    for (const auto& spec : scenarios) {
        CLI::App* cmd = app.add_subcommand(spec.name, spec.help);
        overrides.push_back(std::make_unique<CliOverrides>());
        add_common_options(cmd, *overrides.back());
        runs.emplace_back(cmd, spec.name);
    }

    std::string preset_name;
    std::string preset_out_dir = "out";
    CLI::App* preset_cmd =
        app.add_subcommand("preset", "reproduce one of the reference figures");
    preset_cmd->add_option("name", preset_name, "fig2, fig3, fig4 or fig5")
        ->required();
    preset_cmd->add_option("--out-dir", preset_out_dir, "output directory");

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "cross-check the numeric pipeline against the closed forms");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& error) {
        const int code = app.exit(error);
        return code == 0 ? 0 : 2;
    }

    if (verify_cmd->parsed()) return run_verify() == 0 ? 0 : 1;

    if (preset_cmd->parsed()) {
        std::vector<std::string> names;
        if (preset_name == "fig2") names = {"fig2"};
        else if (preset_name == "fig3") names = {"fig3-top", "fig3-bottom"};
        else if (preset_name == "fig4") names = {"fig4"};
        else if (preset_name == "fig5") names = {"fig5-top", "fig5-bottom"};
        else throw ConfigError("unknown preset '" + preset_name + "'");
        for (const std::string& name : names) {
            ScenarioConfig config = preset_config(name);
            config.out_dir = preset_out_dir;
            report_manifest(config.out_dir, run_scenario(config));
        }
        return 0;
    }

    for (size_t i = 0; i < runs.size(); ++i) {
        if (!runs[i].first->parsed()) continue;
        const ScenarioConfig config = build_config(*overrides[i], runs[i].second);
        report_manifest(config.out_dir, run_scenario(config));
        return 0;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ConfigError& error) {
        std::cerr << "configuration error: " << error.what() << "\n";
        return 2;
    } catch (const DomainError& error) {
        std::cerr << "configuration error: " << error.what() << "\n";
        return 2;
    } catch (const AsymmetryError& error) {
        std::cerr << "configuration error: " << error.what() << "\n";
        return 2;
    } catch (const NoConvergence& error) {
        std::cerr << "solver error: " << error.what() << "\n";
        return 3;
    } catch (const SingularJacobian& error) {
        std::cerr << "solver error: " << error.what() << "\n";
        return 3;
    } catch (const SingularMatrix& error) {
        std::cerr << "solver error: " << error.what() << "\n";
        return 3;
    } catch (const DegenerateSpectrum& error) {
        std::cerr << "solver error: " << error.what() << "\n";
        return 3;
    } catch (const std::ios_base::failure& error) {
        std::cerr << "io error: " << error.what() << "\n";
        return 4;
    } catch (const std::filesystem::filesystem_error& error) {
        std::cerr << "io error: " << error.what() << "\n";
        return 4;
    } catch (const std::exception& error) {
        std::cerr << "error: " << error.what() << "\n";
        return 1;
    }
}
