#pragma once

// Run specifications: strict JSON schema, validation and built-in presets.

#include <mpox/analysis.hpp>
#include <mpox/schedule.hpp>
#include <mpox/sde.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpox {

using Json = nlohmann::ordered_json;

struct AnalysisSpec {
    Window window;
    double kappa = 0.0;
    double chi = 0.0;
    bool lyapunov_is_log1p = true;
    LyapunovShape lyapunov = LyapunovShape::log1p();
    int n_max = 20;
    double series_tol = 1e-12;
    double kbar = 1.0;

    bool operator==(const AnalysisSpec& o) const {
        return window.lo == o.window.lo && window.hi == o.window.hi && kappa == o.kappa && chi == o.chi &&
               lyapunov_is_log1p == o.lyapunov_is_log1p && lyapunov == o.lyapunov && n_max == o.n_max &&
               series_tol == o.series_tol && kbar == o.kbar;
    }
};

struct OutputSpec {
    std::string directory; // empty: decided by the caller
    bool paths_csv = false;
    std::vector<std::string> histograms; // compartment names
    int histogram_bins = 30;
    std::optional<double> histogram_t; // default: terminal time

    bool operator==(const OutputSpec&) const = default;
};

struct RunSpec {
    ParamSchedule schedule;
    State init = State::Zero();
    SimConfig sim;
    std::uint64_t n_paths = 1;
    AnalysisSpec analysis;
    OutputSpec output;

    bool operator==(const RunSpec& o) const {
        return schedule == o.schedule && init == o.init && sim == o.sim && n_paths == o.n_paths &&
               analysis == o.analysis && output == o.output;
    }
};

/// Parses and validates a JSON document. Unknown keys are rejected.
/// Throws SchemaError (with a $.json.path) or ValidationError.
RunSpec parse_config(std::string_view text);
RunSpec parse_config(const Json& doc);
inline RunSpec parse_config(const std::string& text) { return parse_config(std::string_view(text)); }
inline RunSpec parse_config(const char* text) { return parse_config(std::string_view(text)); }

/// Canonical JSON form; parse_config(serialize(spec)) == spec.
Json serialize(const RunSpec& spec);

/// Re-checks every invariant of an already-built spec.
void validate(const RunSpec& spec);

std::vector<std::string> preset_names();
/// Throws ValidationError for an unknown name.
RunSpec preset(std::string_view name);

/// Rates shared by both presets; they differ only in eta3.
Params preset_params(std::string_view name);
NoiseIntensities preset_noise();
State preset_init();

} // namespace mpox
