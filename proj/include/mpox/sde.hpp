#pragma once

// Euler-Maruyama integration with an explicit positivity policy, and a
// classical RK4 integrator of the drift field used as the noise-free reference.

#include <mpox/model.hpp>
#include <mpox/rng.hpp>
#include <mpox/schedule.hpp>

#include <cstdint>
#include <span>
#include <tuple>
#include <string_view>
#include <vector>

namespace mpox {

enum class PositivityPolicy { project_to_zero, reflect };

std::string_view to_string(PositivityPolicy policy);
PositivityPolicy positivity_policy_from_string(std::string_view name);

struct SimConfig {
    double dt = 0.01;
    double t_end = 200.0;
    std::uint64_t seed = 0;
    PositivityPolicy positivity_policy = PositivityPolicy::project_to_zero;
    double guard_eps = kDefaultGuardEps;
    std::int64_t record_stride = 1;

    bool operator==(const SimConfig&) const = default;
};

inline constexpr std::int64_t kMaxSteps = 1'000'000'000;

void validate(const SimConfig& config);

/// Number of uniform steps covering [0, t_end].
std::int64_t step_count(const SimConfig& config);

/// Smallest stride keeping a path at or below `max_samples` recorded states.
std::int64_t default_record_stride(double dt, double t_end, std::int64_t max_samples = 10'000);

struct Path {
    std::vector<double> times;
    std::vector<State> states;
    std::uint64_t projection_events = 0;
    std::uint64_t steps = 0;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;

    std::size_t size() const noexcept { return times.size(); }
    bool operator==(const Path&) const = default;
};

struct StepResult {
    State state;
    bool projected = false;
};

/// One Euler-Maruyama step x + f dt + G dW followed by the positivity policy.
StepResult em_step(const State& x, const Params& params, const NoiseIntensities& noise,
                   const NoiseVector& dW, double dt, PositivityPolicy policy,
                   double guard_eps = kDefaultGuardEps);

/// Same step with coefficients taken from the schedule at time t.
StepResult em_step(const State& x, double t, const ParamSchedule& schedule, const NoiseVector& dW,
                   const SimConfig& config);

/// Integrates on the uniform grid k*dt, drawing increments from `increment(k)`.
/// Records every record_stride-th state and always the terminal one.
/// DomainError is rethrown with the failing time attached.
template <typename IncrementSource>
Path integrate_em(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                  IncrementSource&& increment);

/// EM path with increments from the counter-based stream keyed by (seed, path_index, step).
Path simulate_path(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                   std::uint64_t path_index);

/// Fixed-step RK4 on the drift only (all noise switched off).
Path simulate_ode(const State& init, const ParamSchedule& schedule, const SimConfig& config);

inline HostRatioReport check_hr(const Path& path, double kbar) {
    return check_hr(std::span<const State>(path.states), kbar);
}

// -----------------------------------------------------------------------------

namespace detail {

struct Recorder {
    Path& path;
    std::int64_t stride;
    std::int64_t n_steps;
    double dt;

    void maybe_record(std::int64_t k, const State& x) const {
        if (k % stride == 0 || k == n_steps) {
            path.times.push_back(static_cast<double>(k) * dt);
            path.states.push_back(x);
        }
    }
};

} // namespace detail

template <typename IncrementSource>
Path integrate_em(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                  IncrementSource&& increment) {
    validate(config);
    validate(init);
    const std::int64_t n_steps = step_count(config);

    Path path;
    path.seed = config.seed;
    path.times.reserve(static_cast<std::size_t>(n_steps / config.record_stride + 2));
    path.states.reserve(path.times.capacity());
    const detail::Recorder recorder{path, config.record_stride, n_steps, config.dt};

    const bool frozen = schedule.is_constant();
    auto [params, noise] = eval_schedule(schedule, 0.0);

    State x = init;
    recorder.maybe_record(0, x);
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        if (!frozen) std::tie(params, noise) = eval_schedule(schedule, t);
        StepResult next;
        try {
            next = em_step(x, params, noise, increment(k), config.dt, config.positivity_policy,
                           config.guard_eps);
        } catch (const DomainError& e) {
            throw DomainError(e.what(), t);
        }
        x = next.state;
        path.projection_events += next.projected ? 1 : 0;
        recorder.maybe_record(k + 1, x);
    }
    path.steps = static_cast<std::uint64_t>(n_steps);
    return path;
}

} // namespace mpox
