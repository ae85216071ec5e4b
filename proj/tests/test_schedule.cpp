#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpox/config.hpp>
#include <mpox/schedule.hpp>

#include <random>

using namespace mpox;

namespace {

// Midpoint-rule reference, independent of the breakpoint machinery.
template <typename F>
double brute_integral(F&& f, double a, double b, int n = 2'000'000) {
    const double h = (b - a) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
    return s * h;
}

PiecewiseLinear random_schedule(std::mt19937_64& rng, int n_knots) {
    std::uniform_real_distribution<double> gap(0.5, 5.0);
    std::uniform_real_distribution<double> val(0.0, 2.0);
    std::vector<Knot> knots;
    double t = gap(rng) - 0.5;
    for (int i = 0; i < n_knots; ++i) {
        knots.push_back({t, val(rng)});
        t += gap(rng);
    }
    return PiecewiseLinear(knots);
}

} // namespace

TEST_CASE("degenerate single-knot schedule is constant everywhere") {
    const ParamSchedule s = ParamSchedule::constant(preset_params("example-4-3"), preset_noise());
    for (double t : {0.0, 1.0, 37.5, 1e6}) {
        const auto [params, noise] = eval_schedule(s, t);
        CHECK(params == preset_params("example-4-3"));
        CHECK(noise == preset_noise());
    }
    CHECK(s.is_constant());
}

TEST_CASE("linear interpolation and hold-last extrapolation") {
    const PiecewiseLinear ramp({{0.0, 0.0}, {10.0, 1.0}});
    CHECK(ramp(5.0) == doctest::Approx(0.5));
    const PiecewiseLinear rise({{0.0, 2.0}, {10.0, 4.0}});
    CHECK(rise(25.0) == 4.0);
    CHECK(rise(10.0) == 4.0);
    CHECK(rise(0.0) == 2.0);
    const PiecewiseLinear late({{5.0, 3.0}, {6.0, 1.0}});
    CHECK(late(0.0) == 3.0);
}

TEST_CASE("knot validation") {
    CHECK_THROWS_AS(PiecewiseLinear(std::vector<Knot>{}), ValidationError);
    CHECK_THROWS_AS(PiecewiseLinear({{0.0, 1.0}, {0.0, 2.0}}), ValidationError);
    CHECK_THROWS_AS(PiecewiseLinear({{1.0, 1.0}, {0.5, 2.0}}), ValidationError);

    ParamSchedule s = ParamSchedule::constant(preset_params("example-4-2"), preset_noise());
    s.param(&Params::p) = PiecewiseLinear({{0.0, 0.2}, {10.0, 1.2}});
    CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("p must lie in [0,1]"), ValidationError);
    s.param(&Params::p) = 0.5;
    s.sigma[3] = PiecewiseLinear({{0.0, 0.2}, {10.0, -0.1}});
    CHECK_THROWS_AS(validate(s), ValidationError);
}

TEST_CASE("field accessor maps to canonical slots") {
    ParamSchedule s;
    s.param(&Params::eta3) = 0.25;
    CHECK(eval_schedule(s, 3.0).first.eta3 == 0.25);
    CHECK(s.params[4](0.0) == 0.25);
}

TEST_CASE("crossings split min/max envelopes so Simpson is exact") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_schedule(rng, 6);
        const auto g = random_schedule(rng, 5);
        const PiecewiseLinear* fns[] = {&f, &g};
        const double T = 30.0;
        auto breaks = breakpoints(fns, 0.0, T);
        add_crossings(breaks, f, g);
        auto envelope = [&](double t) { return std::min(f(t), g(t)) + f(t) * g(t); };
        CHECK(integrate_between(envelope, breaks) == doctest::Approx(brute_integral(envelope, 0.0, T)).epsilon(1e-9));
    }
}

TEST_CASE("breakpoints are framed and sorted") {
    const PiecewiseLinear f({{1.0, 0.0}, {3.0, 1.0}, {9.0, 2.0}});
    const PiecewiseLinear g({{3.0, 0.0}, {4.0, 1.0}});
    const PiecewiseLinear* fns[] = {&f, &g};
    const auto b = breakpoints(fns, 0.0, 5.0);
    CHECK(b == std::vector<double>{0.0, 1.0, 3.0, 4.0, 5.0});
}

TEST_CASE("digest is stable and sensitive") {
    const ParamSchedule a = ParamSchedule::constant(preset_params("example-4-2"), preset_noise());
    ParamSchedule b = a;
    CHECK(digest(a) == digest(b));
    b.param(&Params::eta3) = 0.027;
    CHECK(digest(a) != digest(b));
}
