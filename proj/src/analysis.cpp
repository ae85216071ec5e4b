#include <mpox/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mpox {

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::subcritical: return "subcritical";
        case Regime::critical: return "critical";
        case Regime::supercritical: return "supercritical";
    }
    return "critical";
}

std::string_view to_string(SeriesVerdict verdict) {
    switch (verdict) {
        case SeriesVerdict::convergent: return "convergent";
        case SeriesVerdict::inconclusive: return "inconclusive";
        case SeriesVerdict::divergent: return "divergent";
    }
    return "inconclusive";
}

namespace {

double transmission_sum(double p, double eta1, double eta2, double eta3) {
    return (1.0 - p) * (eta1 + eta2) + eta3;
}

double removal_sum(double mu_h, double mu_r, double delta_h, double delta_r) {
    return std::min(mu_h, mu_r) + std::min(delta_h, delta_r);
}

using FnList = std::vector<const PiecewiseLinear*>;
using FnPairs = std::vector<std::pair<const PiecewiseLinear*, const PiecewiseLinear*>>;

// (1/T) int_0^T integrand, exact for integrands that are cubic or lower between
// the knots of `fns` and the sign changes of each pair in `kinks`.
template <typename Integrand>
double time_average(const FnList& fns, const FnPairs& kinks, double horizon, Integrand&& integrand) {
    if (std::all_of(fns.begin(), fns.end(), [](const auto* f) { return f->is_constant(); }))
        return integrand(0.0);
    auto breaks = breakpoints(fns, 0.0, horizon);
    for (const auto& [f, g] : kinks) add_crossings(breaks, *f, *g);
    return integrate_between(integrand, breaks) / horizon;
}

} // namespace

ThresholdReport r0_constant(const Params& k) {
    ThresholdReport r;
    r.numerator = transmission_sum(k.p, k.eta1, k.eta2, k.eta3);
    r.denominator = removal_sum(k.mu_h, k.mu_r, k.delta_h, k.delta_r);
    if (!(r.denominator > 0.0))
        throw DomainError("R0 undefined: min(mu_h,mu_r) + min(delta_h,delta_r) must be > 0");
    r.r0 = r.numerator / r.denominator;
    if (std::abs(r.r0 - 1.0) <= kCriticalTolerance) r.regime = Regime::critical;
    else r.regime = r.r0 < 1.0 ? Regime::subcritical : Regime::supercritical;
    return r;
}

double log_linear_slope(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw ValidationError("log_linear_slope: size mismatch");
    if (t.size() < 3) throw InsufficientData("need at least 3 samples for a slope");
    const double n = static_cast<double>(t.size());
    const double t_mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
    double ly_mean = 0.0;
    for (double v : y) ly_mean += std::log(v);
    ly_mean /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double dt = t[i] - t_mean;
        sxy += dt * (std::log(y[i]) - ly_mean);
        sxx += dt * dt;
    }
    return sxy / sxx;
}

ExtinctionRateReport extinction_rate(const EnsembleResult& ensemble, Window window, const Params& params) {
    if (ensemble.paths.empty()) throw InsufficientData("extinction_rate on an empty ensemble");
    const auto& grid = ensemble.paths.front().times;
    const double slack = 1e-9 * std::max(1.0, grid.back());
    if (!(window.lo >= 0.0) || !(window.hi > window.lo) || window.hi > grid.back() + slack)
        throw ValidationError("extinction window must satisfy 0 <= lo < hi <= simulated horizon");

    std::vector<std::size_t> idx;
    for (std::size_t s = 0; s < grid.size(); ++s)
        if (grid[s] >= window.lo - slack && grid[s] <= window.hi + slack) idx.push_back(s);
    if (idx.size() < 3) throw InsufficientData("fewer than 3 recorded samples inside the window");

    ExtinctionRateReport report;
    std::vector<double> t(idx.size());
    std::vector<double> y(idx.size());
    for (const auto& path : ensemble.paths) {
        bool usable = true;
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const State& x = path.states[idx[j]];
            t[j] = path.times[idx[j]];
            y[j] = x(I_h) + x(Q_h) + x(I_r);
            if (!(y[j] > 0.0)) usable = false;
        }
        if (!usable) {
            ++report.excluded_paths;
            continue;
        }
        report.slope_per_path.push_back(log_linear_slope(t, y));
        report.path_indices.push_back(path.path_index);
    }
    if (report.slope_per_path.empty())
        throw InsufficientData("every path reached I_h + Q_h + I_r = 0 inside the window");

    std::vector<double> sorted = report.slope_per_path;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size();
    report.median_slope = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);

    const auto threshold = r0_constant(params);
    report.theory_bound = threshold.denominator * (threshold.r0 - 1.0);
    return report;
}

ExtinctionIndicator timevarying_extinction_indicator(const ParamSchedule& s, double horizon) {
    if (!(horizon > 0.0)) throw ValidationError("horizon must be > 0");
    const auto& p = s.param(&Params::p);
    const auto& eta1 = s.param(&Params::eta1);
    const auto& eta2 = s.param(&Params::eta2);
    const auto& eta3 = s.param(&Params::eta3);
    const auto& mu_h = s.param(&Params::mu_h);
    const auto& mu_r = s.param(&Params::mu_r);
    const auto& delta_h = s.param(&Params::delta_h);
    const auto& delta_r = s.param(&Params::delta_r);

    ExtinctionIndicator out;
    out.lhs_avg = time_average({&p, &eta1, &eta2, &eta3}, {}, horizon, [&](double t) {
        return transmission_sum(p(t), eta1(t), eta2(t), eta3(t));
    });
    out.rhs_avg = time_average({&mu_h, &mu_r, &delta_h, &delta_r}, {{&mu_h, &mu_r}, {&delta_h, &delta_r}},
                               horizon, [&](double t) {
                                   return removal_sum(mu_h(t), mu_r(t), delta_h(t), delta_r(t));
                               });
    out.satisfied = out.lhs_avg < out.rhs_avg;
    return out;
}

GrowthBoundReport growth_bound(const ParamSchedule& s, double horizon, const LyapunovShape& shape) {
    if (!(horizon > 0.0)) throw ValidationError("horizon must be > 0");
    const auto& theta_h = s.param(&Params::theta_h);
    const auto& theta_r = s.param(&Params::theta_r);
    const auto& mu_h = s.param(&Params::mu_h);
    const auto& mu_r = s.param(&Params::mu_r);
    const auto& theta_q = s.param(&Params::theta_q);
    const auto& delta_h = s.param(&Params::delta_h);
    const auto& delta_r = s.param(&Params::delta_r);
    const auto& p = s.param(&Params::p);
    const auto& sigma1 = s.sigma[0];
    const auto& sigma2 = s.sigma[1];

    GrowthBoundReport r;
    r.a = shape.sup_abs_dF *
          time_average({&theta_h, &theta_r}, {}, horizon, [&](double t) { return theta_h(t) + theta_r(t); });
    r.b = time_average({&mu_h, &mu_r}, {{&mu_h, &mu_r}}, horizon,
                       [&](double t) { return std::max(mu_h(t), mu_r(t)); });
    r.c = time_average({&theta_q, &delta_h, &delta_r}, {}, horizon,
                       [&](double t) { return (2.0 - theta_q(t)) * delta_h(t) + delta_r(t); });
    r.d = time_average({&sigma1, &sigma2}, {}, horizon, [&](double t) {
        const double s1 = sigma1(t);
        const double s2 = sigma2(t);
        return s1 * s1 + 2.0 * s2 * s2;
    });
    if (!(r.b > 0.0)) throw DomainError("growth bound needs a positive average of max(mu_h, mu_r)");

    // Smallest campaign effectiveness on [0, T]: endpoints and interior knots.
    double p_min = std::min(p(0.0), p(horizon));
    for (const auto& k : p.knots())
        if (k.t > 0.0 && k.t < horizon) p_min = std::min(p_min, k.value);
    r.damping_sq = (1.0 - p_min) * (1.0 - p_min);

    r.c1_tilde = shape.c1_tilde;
    r.c2_tilde = shape.c2_tilde;
    r.bound = r.a + 3.0 * r.c1_tilde * (2.0 * r.b + r.c) + r.damping_sq * r.c2_tilde * r.d;
    return r;
}

SeriesCheck xi_series_check(std::span<const PiecewiseLinear> sigmas, int n_max, double tol) {
    if (n_max < 4) throw ValidationError("n_max must be >= 4");
    if (sigmas.empty()) throw ValidationError("series check needs at least one intensity schedule");

    FnList fns;
    for (const auto& f : sigmas) fns.push_back(&f);
    FnPairs kinks;
    for (std::size_t i = 0; i < fns.size(); ++i)
        for (std::size_t j = i + 1; j < fns.size(); ++j) kinks.emplace_back(fns[i], fns[j]);
    auto xi = [&](double t) {
        double m = (*fns.front())(t);
        for (const auto* f : fns) m = std::max(m, (*f)(t));
        return m;
    };

    SeriesCheck out;
    double running = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        const double upper = std::ldexp(1.0, k + 1);
        auto breaks = breakpoints(fns, 0.0, upper);
        for (const auto& [f, g] : kinks) add_crossings(breaks, *f, *g);
        const double term = std::ldexp(integrate_between(xi, breaks), -2 * k);
        running += term;
        out.terms.push_back(term);
        out.partial_sums.push_back(running);
    }

    const std::size_t n = out.terms.size();
    const double last = out.terms[n - 1];
    const double prev = out.terms[n - 2];
    out.limit_estimate = running;
    if (last <= tol) {
        out.classification = SeriesVerdict::convergent;
    } else if (prev > 0.0 && last / prev < 0.9) {
        out.classification = SeriesVerdict::convergent;
        const double ratio = last / prev;
        out.limit_estimate = running + last * ratio / (1.0 - ratio);
    } else if (out.terms[n - 3] <= prev && prev <= last) {
        out.classification = SeriesVerdict::divergent;
    } else {
        out.classification = SeriesVerdict::inconclusive;
    }
    return out;
}

BoundednessStats boundedness_stats(const EnsembleResult& ensemble, double kappa, double chi) {
    if (ensemble.paths.empty()) throw InsufficientData("boundedness_stats on an empty ensemble");
    const auto& grid = ensemble.paths.front().times;
    const double start = grid.front() + 0.75 * (grid.back() - grid.front());

    BoundednessStats out;
    std::uint64_t exceed = 0;
    std::uint64_t at_least = 0;
    std::uint64_t within = 0;
    for (const auto& path : ensemble.paths) {
        for (std::size_t s = 0; s < path.times.size(); ++s) {
            if (path.times[s] < start) continue;
            const double norm = path.states[s].norm();
            exceed += norm > kappa ? 1 : 0;
            at_least += norm >= kappa ? 1 : 0;
            within += norm <= chi ? 1 : 0;
            ++out.samples;
        }
    }
    const double n = static_cast<double>(out.samples);
    out.p_exceed_kappa = static_cast<double>(exceed) / n;
    out.p_at_least_kappa = static_cast<double>(at_least) / n;
    out.p_within_chi = static_cast<double>(within) / n;
    return out;
}

double max_log_growth(const EnsembleResult& ensemble, double t_lo, double t_hi) {
    if (!(t_lo > 0.0)) throw ValidationError("max_log_growth needs t_lo > 0");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& path : ensemble.paths)
        for (std::size_t s = 0; s < path.times.size(); ++s) {
            const double t = path.times[s];
            if (t < t_lo || t > t_hi) continue;
            const double total = human_total(path.states[s]) + rodent_total(path.states[s]);
            best = std::max(best, std::log1p(total) / t);
        }
    return best;
}

} // namespace mpox
