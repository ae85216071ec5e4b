#include <mpox/schedule.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace mpox {

PiecewiseLinear::PiecewiseLinear(std::vector<Knot> knots) : knots_(std::move(knots)) {
    if (knots_.empty()) throw ValidationError("schedule needs at least one knot");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].t) || !std::isfinite(knots_[i].value))
            throw ValidationError("schedule knots must be finite");
        if (i > 0 && !(knots_[i].t > knots_[i - 1].t))
            throw ValidationError("schedule knot times must be strictly increasing");
    }
}

double PiecewiseLinear::operator()(double t) const {
    if (t <= knots_.front().t) return knots_.front().value;
    if (t >= knots_.back().t) return knots_.back().value;
    auto hi = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double v, const Knot& k) { return v < k.t; });
    auto lo = hi - 1;
    const double w = (t - lo->t) / (hi->t - lo->t);
    return lo->value + w * (hi->value - lo->value);
}

double PiecewiseLinear::min_value() const {
    return std::min_element(knots_.begin(), knots_.end(),
                            [](const Knot& a, const Knot& b) { return a.value < b.value; })
        ->value;
}

double PiecewiseLinear::max_value() const {
    return std::max_element(knots_.begin(), knots_.end(),
                            [](const Knot& a, const Knot& b) { return a.value < b.value; })
        ->value;
}

ParamSchedule ParamSchedule::constant(const Params& params, const NoiseIntensities& noise) {
    ParamSchedule s;
    const auto fields = param_fields();
    for (int i = 0; i < kParamCount; ++i) s.params[i] = PiecewiseLinear(params.*fields[i].second);
    for (int i = 0; i < kNoiseDim; ++i) s.sigma[i] = PiecewiseLinear(noise[i]);
    return s;
}

namespace {

int field_index(double Params::*field) {
    const auto fields = param_fields();
    for (int i = 0; i < kParamCount; ++i)
        if (fields[i].second == field) return i;
    return -1; // unreachable for members of Params
}

} // namespace

const PiecewiseLinear& ParamSchedule::param(double Params::*field) const {
    return params[field_index(field)];
}

PiecewiseLinear& ParamSchedule::param(double Params::*field) { return params[field_index(field)]; }

bool ParamSchedule::is_constant() const {
    auto constant = [](const PiecewiseLinear& f) { return f.is_constant(); };
    return std::all_of(params.begin(), params.end(), constant) &&
           std::all_of(sigma.begin(), sigma.end(), constant);
}

void validate(const ParamSchedule& schedule) {
    const auto fields = param_fields();
    // Linear interpolation cannot leave [min knot, max knot], so checking knots suffices.
    for (int i = 0; i < kParamCount; ++i) {
        const std::string name(fields[i].first);
        const auto& f = schedule.params[i];
        if (f.min_value() < 0.0) throw ValidationError(name + " must be >= 0 at every knot");
        if ((name == "p" || name == "theta_q") && f.max_value() > 1.0)
            throw ValidationError(name + " must lie in [0,1] at every knot");
    }
    for (int i = 0; i < kNoiseDim; ++i)
        if (schedule.sigma[i].min_value() < 0.0)
            throw ValidationError("sigma" + std::to_string(i + 1) + " must be >= 0 at every knot");
}

std::pair<Params, NoiseIntensities> eval_schedule(const ParamSchedule& schedule, double t) {
    Params params;
    const auto fields = param_fields();
    for (int i = 0; i < kParamCount; ++i) params.*fields[i].second = schedule.params[i](t);
    NoiseIntensities noise;
    for (int i = 0; i < kNoiseDim; ++i) noise.sigma(i) = schedule.sigma[i](t);
    return {params, noise};
}

std::uint64_t digest(const ParamSchedule& schedule) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int b = 0; b < 8; ++b) {
            h ^= (word >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    auto mix_fn = [&](const PiecewiseLinear& f) {
        mix(f.knots().size());
        for (const auto& k : f.knots()) {
            mix(std::bit_cast<std::uint64_t>(k.t));
            mix(std::bit_cast<std::uint64_t>(k.value));
        }
    };
    for (const auto& f : schedule.params) mix_fn(f);
    for (const auto& f : schedule.sigma) mix_fn(f);
    return h;
}

std::vector<double> breakpoints(std::span<const PiecewiseLinear* const> fns, double a, double b) {
    std::vector<double> out{a, b};
    for (const auto* f : fns)
        for (const auto& k : f->knots())
            if (k.t > a && k.t < b) out.push_back(k.t);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void add_crossings(std::vector<double>& breaks, const PiecewiseLinear& f, const PiecewiseLinear& g) {
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        const double d_lo = f(lo) - g(lo);
        const double d_hi = f(hi) - g(hi);
        if ((d_lo < 0.0 && d_hi > 0.0) || (d_lo > 0.0 && d_hi < 0.0)) {
            const double root = lo + (hi - lo) * d_lo / (d_lo - d_hi);
            if (root > lo && root < hi) roots.push_back(root);
        }
    }
    breaks.insert(breaks.end(), roots.begin(), roots.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
}

} // namespace mpox
