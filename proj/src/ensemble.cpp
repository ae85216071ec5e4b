#include <mpox/ensemble.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <thread>

namespace mpox {

namespace {

struct Slot {
    std::optional<Path> path;
    std::optional<AbortedPath> aborted;
};

} // namespace

EnsembleResult run_ensemble(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                            std::uint64_t n_paths, EnsembleOptions options) {
    if (n_paths < 1) throw ValidationError("n_paths must be >= 1");
    validate(config);
    validate(init);
    validate(schedule);

    std::vector<Slot> slots(n_paths);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (std::uint64_t i = next.fetch_add(1); i < n_paths; i = next.fetch_add(1)) {
            try {
                slots[i].path = simulate_path(init, schedule, config, i);
            } catch (const DomainError& e) {
                slots[i].aborted = AbortedPath{i, e.time().value_or(0.0), e.what()};
            }
        }
    };

    unsigned threads = options.threads == 0 ? std::max(1U, std::thread::hardware_concurrency())
                                            : options.threads;
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, n_paths));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
    }

    EnsembleResult out;
    out.seed = config.seed;
    out.n_paths = n_paths;
    out.schedule_digest = digest(schedule);
    out.config = config;
    for (auto& slot : slots) {
        if (slot.path) out.paths.push_back(std::move(*slot.path));
        else out.aborted.push_back(std::move(*slot.aborted));
    }
    if (out.paths.empty())
        throw DomainError("all " + std::to_string(n_paths) + " paths aborted; first: " +
                              out.aborted.front().reason,
                          out.aborted.front().time);
    aggregate(out);
    return out;
}

void aggregate(EnsembleResult& ensemble) {
    if (ensemble.paths.empty()) throw InsufficientData("cannot aggregate an empty ensemble");
    const auto& grid = ensemble.paths.front().times;
    for (const auto& p : ensemble.paths)
        if (p.times != grid) throw ValidationError("ensemble paths do not share a time grid");

    const std::size_t n_samples = grid.size();
    const double n = static_cast<double>(ensemble.paths.size());
    ensemble.times = grid;
    ensemble.mean_series.assign(n_samples, State::Zero());
    ensemble.std_series.assign(n_samples, State::Zero());

    for (std::size_t s = 0; s < n_samples; ++s) {
        // Shifted by the first path so identical paths give exactly zero spread.
        const State& shift = ensemble.paths.front().states[s];
        State sum = State::Zero();
        for (const auto& p : ensemble.paths) sum += p.states[s] - shift;
        const State mean = shift + sum / n;
        State sq = State::Zero();
        for (const auto& p : ensemble.paths) sq += (p.states[s] - mean).cwiseAbs2();
        ensemble.mean_series[s] = mean;
        ensemble.std_series[s] = (sq / n).cwiseSqrt();
    }
}

std::ptrdiff_t nearest_sample(const std::vector<double>& times, double t, double tolerance) {
    if (times.empty()) return -1;
    auto it = std::lower_bound(times.begin(), times.end(), t);
    std::ptrdiff_t best = -1;
    double best_gap = tolerance;
    for (auto cand : {it - 1, it}) {
        if (cand < times.begin() || cand >= times.end()) continue;
        const double gap = std::abs(*cand - t);
        if (gap <= best_gap) {
            best_gap = gap;
            best = cand - times.begin();
        }
    }
    return best;
}

Histogram histogram(const EnsembleResult& ensemble, int compartment, double t, int n_bins) {
    if (compartment < 0 || compartment >= kStateDim) throw ValidationError("unknown compartment index");
    if (n_bins < 1) throw ValidationError("n_bins must be >= 1");
    if (ensemble.paths.empty()) throw InsufficientData("histogram of an empty ensemble");

    const auto& times = ensemble.paths.front().times;
    const double tolerance = ensemble.config.dt * static_cast<double>(ensemble.config.record_stride);
    const auto idx = nearest_sample(times, t, tolerance);
    if (idx < 0) throw InsufficientData("no recorded sample within dt*record_stride of t");

    std::vector<double> values;
    values.reserve(ensemble.paths.size());
    for (const auto& p : ensemble.paths) values.push_back(p.states[static_cast<std::size_t>(idx)](compartment));
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;

    Histogram h;
    h.t = times[static_cast<std::size_t>(idx)];
    if (lo == hi) {
        h.degenerate = true;
        h.bin_edges = {lo, hi};
        h.counts = {values.size()};
        return h;
    }
    h.bin_edges.resize(static_cast<std::size_t>(n_bins) + 1);
    const double width = (hi - lo) / n_bins;
    for (int b = 0; b <= n_bins; ++b) h.bin_edges[b] = lo + width * b;
    h.bin_edges.back() = hi;
    h.counts.assign(static_cast<std::size_t>(n_bins), 0);
    for (double v : values) {
        auto bin = static_cast<std::ptrdiff_t>((v - lo) / width);
        bin = std::clamp<std::ptrdiff_t>(bin, 0, n_bins - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    return h;
}

} // namespace mpox
