#pragma once

// End-to-end scenario execution: ensemble, analysis and on-disk artifacts.

#include <mpox/config.hpp>
#include <mpox/ensemble.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace mpox {

struct RunOptions {
    std::filesystem::path out_dir;
    unsigned threads = 1; // never affects output bytes
};

struct ScenarioResult {
    EnsembleResult ensemble;
    Json analysis;
    std::vector<std::filesystem::path> files; // in emission order, manifest last
};

/// Builds the analysis report for a finished ensemble.
Json analysis_report(const RunSpec& spec, const EnsembleResult& ensemble);

/// Runs the spec and writes timeseries.csv, optional paths.csv,
/// histogram_<compartment>.csv, analysis.json and manifest.json into out_dir.
ScenarioResult run_scenario(const RunSpec& spec, const RunOptions& options);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

} // namespace mpox
