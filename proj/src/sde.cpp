#include <mpox/sde.hpp>

#include <cmath>
#include <string>

namespace mpox {

std::string_view to_string(PositivityPolicy policy) {
    switch (policy) {
        case PositivityPolicy::project_to_zero: return "project_to_zero";
        case PositivityPolicy::reflect: return "reflect";
    }
    return "project_to_zero";
}

PositivityPolicy positivity_policy_from_string(std::string_view name) {
    if (name == "project_to_zero") return PositivityPolicy::project_to_zero;
    if (name == "reflect") return PositivityPolicy::reflect;
    throw ValidationError("unknown positivity_policy '" + std::string(name) +
                          "' (expected project_to_zero or reflect)");
}

void validate(const SimConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt)) throw ValidationError("sim.dt must be > 0");
    if (!(config.t_end >= config.dt) || !std::isfinite(config.t_end))
        throw ValidationError("sim.t_end must be >= sim.dt");
    if (config.record_stride < 1) throw ValidationError("sim.record_stride must be >= 1");
    if (!(config.guard_eps > 0.0)) throw ValidationError("sim.guard_eps must be > 0");
    if (config.t_end / config.dt > static_cast<double>(kMaxSteps))
        throw ValidationError("sim.t_end / sim.dt exceeds the 1e9 step cap");
}

std::int64_t step_count(const SimConfig& config) {
    return std::llround(config.t_end / config.dt);
}

std::int64_t default_record_stride(double dt, double t_end, std::int64_t max_samples) {
    const auto n_steps = std::llround(t_end / dt);
    // n_steps / stride + 1 samples, plus the terminal one when stride does not divide n_steps.
    std::int64_t stride = std::max<std::int64_t>(1, (n_steps + max_samples - 2) / (max_samples - 1));
    while (n_steps / stride + 1 + (n_steps % stride != 0 ? 1 : 0) > max_samples) ++stride;
    return stride;
}

StepResult em_step(const State& x, const Params& params, const NoiseIntensities& noise,
                   const NoiseVector& dW, double dt, PositivityPolicy policy, double guard_eps) {
    StepResult out;
    out.state = x + drift(x, params, guard_eps) * dt + diffusion(x, params, noise, guard_eps) * dW;
    for (int i = 0; i < kStateDim; ++i) {
        if (out.state(i) < 0.0) {
            out.state(i) = policy == PositivityPolicy::reflect ? -out.state(i) : 0.0;
            out.projected = true;
        }
    }
    return out;
}

StepResult em_step(const State& x, double t, const ParamSchedule& schedule, const NoiseVector& dW,
                   const SimConfig& config) {
    const auto [params, noise] = eval_schedule(schedule, t);
    return em_step(x, params, noise, dW, config.dt, config.positivity_policy, config.guard_eps);
}

Path simulate_path(const State& init, const ParamSchedule& schedule, const SimConfig& config,
                   std::uint64_t path_index) {
    const double dt = config.dt;
    Path path = integrate_em(init, schedule, config, [&](std::int64_t k) {
        return brownian_increments(config.seed, path_index, static_cast<std::uint64_t>(k), dt);
    });
    path.path_index = path_index;
    return path;
}

Path simulate_ode(const State& init, const ParamSchedule& schedule, const SimConfig& config) {
    validate(config);
    validate(init);
    const std::int64_t n_steps = step_count(config);
    const double h = config.dt;
    const double eps = config.guard_eps;

    Path path;
    path.seed = config.seed;
    const detail::Recorder recorder{path, config.record_stride, n_steps, h};

    auto field = [&](double t, const State& x) {
        return drift(x, eval_schedule(schedule, t).first, eps);
    };

    State x = init;
    recorder.maybe_record(0, x);
    for (std::int64_t k = 0; k < n_steps; ++k) {
        const double t = static_cast<double>(k) * h;
        try {
            const State k1 = field(t, x);
            const State k2 = field(t + 0.5 * h, x + 0.5 * h * k1);
            const State k3 = field(t + 0.5 * h, x + 0.5 * h * k2);
            const State k4 = field(t + h, x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } catch (const DomainError& e) {
            throw DomainError(e.what(), t);
        }
        recorder.maybe_record(k + 1, x);
    }
    path.steps = static_cast<std::uint64_t>(n_steps);
    return path;
}

} // namespace mpox
