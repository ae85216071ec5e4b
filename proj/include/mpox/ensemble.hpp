#pragma once

// Monte Carlo ensembles: independent paths keyed by path index, aggregated
// in index order after all workers finish.

#include <mpox/sde.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mpox {

struct AbortedPath {
    std::uint64_t path_index = 0;
    double time = 0.0;
    std::string reason;
};

struct EnsembleResult {
    std::vector<Path> paths; // surviving paths in index order
    std::vector<AbortedPath> aborted;
    std::vector<double> times;
    std::vector<State> mean_series;
    std::vector<State> std_series; // population convention (divide by n)

    std::uint64_t seed = 0;
    std::uint64_t n_paths = 0; // requested
    std::uint64_t schedule_digest = 0;
    SimConfig config;
};

struct EnsembleOptions {
    unsigned threads = 1; // 0 = hardware concurrency
};

/// Runs paths 0..n_paths-1. Paths that raise DomainError are excluded from the
/// aggregates and listed in `aborted`; throws DomainError if every path aborts.
EnsembleResult run_ensemble(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                            std::uint64_t n_paths, EnsembleOptions options = {});

/// Two-pass mean / population standard deviation over paths sharing a time grid.
void aggregate(EnsembleResult& ensemble);

struct Histogram {
    std::vector<double> bin_edges; // n_bins + 1 entries
    std::vector<std::uint64_t> counts;
    double t = 0.0; // the recorded sample time actually used
    bool degenerate = false; // all values equal: a single bin holds all mass
};

/// Equal-width histogram of one compartment across paths at the recorded sample
/// nearest to t. Throws InsufficientData if no sample lies within dt*record_stride.
Histogram histogram(const EnsembleResult& ensemble, int compartment, double t, int n_bins);

/// Index of the recorded sample nearest to t, or -1 if farther than `tolerance`.
std::ptrdiff_t nearest_sample(const std::vector<double>& times, double t, double tolerance);

} // namespace mpox
