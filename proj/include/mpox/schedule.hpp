#pragma once

// Time-varying coefficients: every rate and noise intensity is a
// piecewise-linear function of time with constant extrapolation outside
// its knot range.

#include <mpox/model.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mpox {

struct Knot {
    double t = 0.0;
    double value = 0.0;
    bool operator==(const Knot&) const = default;
};

class PiecewiseLinear {
public:
    PiecewiseLinear() : knots_{{0.0, 0.0}} {}
    /* implicit */ PiecewiseLinear(double constant) : knots_{{0.0, constant}} {}
    /// Throws ValidationError unless knots are nonempty, finite and strictly increasing in t.
    explicit PiecewiseLinear(std::vector<Knot> knots);

    double operator()(double t) const;

    const std::vector<Knot>& knots() const noexcept { return knots_; }
    bool is_constant() const noexcept { return knots_.size() == 1; }
    double min_value() const;
    double max_value() const;

    bool operator==(const PiecewiseLinear&) const = default;

private:
    std::vector<Knot> knots_;
};

inline constexpr int kParamCount = 13;

/// One schedule per Params field (canonical param_fields() order) and per noise source.
struct ParamSchedule {
    std::array<PiecewiseLinear, kParamCount> params;
    std::array<PiecewiseLinear, kNoiseDim> sigma;

    static ParamSchedule constant(const Params& params, const NoiseIntensities& noise);

    const PiecewiseLinear& param(double Params::*field) const;
    PiecewiseLinear& param(double Params::*field);

    bool is_constant() const;
    bool operator==(const ParamSchedule&) const = default;
};

/// Throws ValidationError if any knot value breaks a Params / NoiseIntensities invariant.
void validate(const ParamSchedule& schedule);

std::pair<Params, NoiseIntensities> eval_schedule(const ParamSchedule& schedule, double t);

/// Stable 64-bit FNV-1a digest over every knot of the schedule.
std::uint64_t digest(const ParamSchedule& schedule);

// --- exact integration over piecewise-polynomial integrands ------------------

/// Sorted, deduplicated knot times of `fns` strictly inside (a, b), framed by a and b.
std::vector<double> breakpoints(std::span<const PiecewiseLinear* const> fns, double a, double b);

/// Inserts the points in (a, b) where f - g changes sign. `breaks` must already
/// contain the knots of f and g so both are linear between consecutive entries.
void add_crossings(std::vector<double>& breaks, const PiecewiseLinear& f, const PiecewiseLinear& g);

/// Composite Simpson over consecutive breakpoints. Exact (up to rounding) when
/// the integrand is a polynomial of degree <= 3 between breakpoints.
template <typename Integrand>
double integrate_between(Integrand&& integrand, const std::vector<double>& breaks) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i];
        const double hi = breaks[i + 1];
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi);
        total += (hi - lo) / 6.0 * (integrand(lo) + 4.0 * integrand(mid) + integrand(hi));
    }
    return total;
}

} // namespace mpox
