#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "noon/atmosphere.hpp"
#include "noon/state.hpp"

namespace noon {

enum class Scenario {
    MixedPhaseError,   // fig1: phi-sweep of the phase error for N00N/vacuum mixtures
    LossyMinError,     // fig2: M-sweep of the minimal error under constant loss
    DephasingMinError, // fig3: delta-sweep of the minimal error under Gaussian dephasing
    VacuumMixCombined, // fig4: p-sweep emitting both tau and the minimal error
    TurbulenceTau,     // fig5: distance-sweep of tau in both propagation geometries
    Custom,            // phi-sweep of a configured state after a channel list
};

Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

struct SweepVar {
    std::string name;
    double start = 0.0;
    double stop = 1.0;
    int count = 2;
    bool log_scale = false;
};

struct SweepConfig {
    Scenario scenario = Scenario::Custom;
    SweepVar sweep;
    int m = 2;                    // probed interference order / photon number N
    double kappa = 0.95;          // constant-loss scenarios
    double theta = 0.95;
    std::vector<double> mix_p{0.4, 0.5, 0.9}; // fig1 curves
    BeamParams beam;              // turbulence scenario
    nlohmann::json state_spec;    // custom scenario
    nlohmann::json channel_specs = nlohmann::json::array();
    std::uint64_t seed = 0;       // recorded; presets are fully deterministic
    int jobs = 0;                 // 0 = NOON_SIM_JOBS env or all cores
};

// Preset matching a scenario's figure; `custom` yields a minimal skeleton.
SweepConfig preset_config(Scenario s);

// Parses and validates a config document; unknown scenario names, missing
// scenario-required fields and malformed ranges raise ConfigError with the
// offending field in the message. Fields not present fall back to the
// scenario preset.
SweepConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const SweepConfig& c);

struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows; // NaN cells mark singular points
    nlohmann::json metadata;
    std::vector<std::string> skipped; // one log line per omitted row
};

SweepResult run_scenario(const SweepConfig& config);

// Grid of sweep values (linear or log) for a SweepVar.
std::vector<double> sweep_grid(const SweepVar& v);

// CSV text: header row, '.' decimal, %.12g cells; rows containing NaN are
// omitted (they are listed in result.skipped instead).
std::string to_csv(const SweepResult& r);

// Self-contained gnuplot script referencing the CSV by relative path.
std::string emit_plot_script(const SweepResult& r, const std::string& csv_name);

// Writes <base>.csv, <base>.meta.json, <base>.gp and, when rows were
// skipped, <base>.skipped.log under out_dir (created if missing).
void write_result(const SweepResult& r, const std::string& out_dir, const std::string& base);

// State construction from the custom-scenario JSON spec.
NoisyNoonState state_from_spec(const nlohmann::json& spec);
// Applies one channel-spec document; exposed for row-recomputability tests.
NoisyNoonState apply_channel_spec(const NoisyNoonState& s, const nlohmann::json& spec);

// Index-parallel map used by the sweep drivers (OpenMP when available).
void parallel_for(long n, int jobs, const std::function<void(long)>& body);
void serial_for(long n, const std::function<void(long)>& body);

} // namespace noon
