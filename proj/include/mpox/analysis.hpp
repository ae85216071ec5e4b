#pragma once

// Analytic thresholds and finite-horizon diagnostics for the transmission model.

#include <mpox/ensemble.hpp>
#include <mpox/schedule.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace mpox {

enum class Regime { subcritical, critical, supercritical };

std::string_view to_string(Regime regime);

inline constexpr double kCriticalTolerance = 1e-9;

struct ThresholdReport {
    double r0 = 0.0;
    double numerator = 0.0;   // (1-p)(eta1+eta2) + eta3
    double denominator = 0.0; // min(mu_h,mu_r) + min(delta_h,delta_r)
    Regime regime = Regime::subcritical;
};

/// Basic reproduction number. Throws DomainError when the denominator vanishes.
ThresholdReport r0_constant(const Params& params);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct ExtinctionRateReport {
    std::vector<double> slope_per_path;
    std::vector<std::uint64_t> path_indices; // matches slope_per_path
    std::uint64_t excluded_paths = 0;        // some windowed sample had I_h+Q_h+I_r <= 0
    double median_slope = 0.0;
    double theory_bound = 0.0; // (min mu + min delta)(R0 - 1)
};

/// Least-squares slope of ln(y) against t. Throws InsufficientData for < 3 points.
double log_linear_slope(const std::vector<double>& t, const std::vector<double>& y);

/// Per-path slope of ln(I_h + Q_h + I_r) over the window, and the theoretical bound.
ExtinctionRateReport extinction_rate(const EnsembleResult& ensemble, Window window, const Params& params);

struct ExtinctionIndicator {
    double lhs_avg = 0.0; // time average of (1-p)(eta1+eta2) + eta3
    double rhs_avg = 0.0; // time average of min(mu_h,mu_r) + min(delta_h,delta_r)
    bool satisfied = false;
};

/// Time-averaged extinction condition for time-varying coefficients over [0, T].
/// Constant schedules reduce to the same arithmetic as r0_constant.
ExtinctionIndicator timevarying_extinction_indicator(const ParamSchedule& schedule, double horizon);

/// Shape constants of the Lyapunov function F of the total population.
struct LyapunovShape {
    double sup_abs_dF = 1.0; // sup |F'|
    double c1_tilde = 1.0;   // sup x F'(x)
    double c2_tilde = 1.0;   // sup x^2 |F''(x)|

    /// F(x) = ln(1 + x): every constant equals one.
    static LyapunovShape log1p() { return {}; }
    bool operator==(const LyapunovShape&) const = default;
};

struct GrowthBoundReport {
    double a = 0.0; // avg (theta_h + theta_r) * sup|F'|
    double b = 0.0; // avg max(mu_h, mu_r)
    double c = 0.0; // avg (2 - theta_q) delta_h + delta_r
    double d = 0.0; // avg sigma1^2 + 2 sigma2^2
    double c1_tilde = 0.0;
    double c2_tilde = 0.0;
    double damping_sq = 0.0; // max over [0,T] of (1 - p)^2
    double bound = 0.0;      // a + 3 c1 (2b + c) + damping_sq c2 d
};

/// Asymptotic growth-rate bound for F(N_h + N_r). Throws DomainError if b <= 0.
GrowthBoundReport growth_bound(const ParamSchedule& schedule, double horizon, const LyapunovShape& shape);

enum class SeriesVerdict { convergent, inconclusive, divergent };

std::string_view to_string(SeriesVerdict verdict);

struct SeriesCheck {
    std::vector<double> terms;        // 2^-2k * int_0^{2^(k+1)} Xi, k = 1..n_max
    std::vector<double> partial_sums; // running sums of terms
    double limit_estimate = 0.0;      // partial sum plus geometric tail when convergent
    SeriesVerdict classification = SeriesVerdict::inconclusive;
};

/// Noise series check with Xi(s) = max of the six multiplicative intensities
/// sigma3..sigma8 at s. `tol` treats terms at or below it as zero.
SeriesCheck xi_series_check(std::span<const PiecewiseLinear> sigma3_to_8, int n_max, double tol = 1e-12);

inline SeriesCheck xi_series_check(const ParamSchedule& schedule, int n_max, double tol = 1e-12) {
    return xi_series_check(std::span<const PiecewiseLinear>(schedule.sigma).subspan(2), n_max, tol);
}

struct BoundednessStats {
    double p_exceed_kappa = 0.0;      // P(|X| > kappa)
    double p_at_least_kappa = 0.0; // P(|X| >= kappa)
    double p_within_chi = 0.0;        // P(|X| <= chi)
    std::uint64_t samples = 0;
};

/// Tail frequencies of the Euclidean state norm over the final quarter of the
/// horizon, pooled across paths.
BoundednessStats boundedness_stats(const EnsembleResult& ensemble, double kappa, double chi);

/// max over recorded t in [t_lo, t_hi] and all paths of ln(1 + N_h + N_r) / t.
double max_log_growth(const EnsembleResult& ensemble, double t_lo, double t_hi);

} // namespace mpox
