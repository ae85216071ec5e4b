#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpox/config.hpp>
#include <mpox/sde.hpp>

using namespace mpox;

namespace {

ParamSchedule preset_schedule(const char* name, bool noisy = true) {
    return ParamSchedule::constant(preset_params(name), noisy ? preset_noise() : NoiseIntensities{});
}

SimConfig make_config(double dt, double t_end, std::int64_t stride = 1, std::uint64_t seed = 1) {
    SimConfig c;
    c.dt = dt;
    c.t_end = t_end;
    c.record_stride = stride;
    c.seed = seed;
    return c;
}

} // namespace

TEST_CASE("noise-free Euler step of the reference state") {
    const auto out = em_step(preset_init(), preset_params("example-4-2"), preset_noise(), NoiseVector::Zero(), 0.1,
                             PositivityPolicy::project_to_zero);
    CHECK(out.state(S_h) == doctest::Approx(90.537533).epsilon(1e-12));
    CHECK_FALSE(out.projected);
}

TEST_CASE("zero step with zero increments is the identity") {
    const auto out = em_step(preset_init(), preset_params("example-4-3"), preset_noise(), NoiseVector::Zero(), 0.0,
                             PositivityPolicy::project_to_zero);
    CHECK(out.state == preset_init());
}

TEST_CASE("schedule overload evaluates coefficients at t") {
    ParamSchedule s = preset_schedule("example-4-2");
    s.param(&Params::theta_h) = PiecewiseLinear({{0.0, 0.0}, {10.0, 20.0}});
    const SimConfig c = make_config(0.1, 1.0);
    const auto at5 = em_step(preset_init(), 5.0, s, NoiseVector::Zero(), c);
    const auto at0 = em_step(preset_init(), 0.0, s, NoiseVector::Zero(), c);
    CHECK(at5.state(S_h) - at0.state(S_h) == doctest::Approx(0.1 * 10.0));
}

TEST_CASE("positivity policies") {
    State x = preset_init();
    x(S_h) = 1e-6;
    NoiseVector dw = NoiseVector::Zero();
    dw(2) = -1e3; // drives S_h through zero via sigma3 * S_h * dW3
    Params k = preset_params("example-4-2");
    k.theta_h = 0.0;
    const auto projected = em_step(x, k, preset_noise(), dw, 0.01, PositivityPolicy::project_to_zero);
    CHECK(projected.projected);
    CHECK(projected.state(S_h) == 0.0);

    const auto reflected = em_step(x, k, preset_noise(), dw, 0.01, PositivityPolicy::reflect);
    CHECK(reflected.projected);
    CHECK(reflected.state(S_h) > 0.0);
    CHECK((reflected.state.array() >= 0.0).all());

    CHECK(positivity_policy_from_string("reflect") == PositivityPolicy::reflect);
    CHECK_THROWS_AS(positivity_policy_from_string("clip"), ValidationError);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(make_config(0.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(validate(make_config(0.1, 0.05)), ValidationError);
    CHECK_THROWS_AS(validate(make_config(0.1, 1.0, 0)), ValidationError);
    CHECK_THROWS_AS(validate(make_config(1e-9, 10.0)), ValidationError);
    CHECK_NOTHROW(validate(make_config(0.1, 1.0)));
}

TEST_CASE("recording grid honours the stride and keeps the terminal state") {
    const auto path = simulate_path(preset_init(), preset_schedule("example-4-2"), make_config(0.1, 1.0, 3), 0);
    REQUIRE(path.size() == 5);
    CHECK(path.times[0] == 0.0);
    CHECK(path.times[1] == doctest::Approx(0.3));
    CHECK(path.times.back() == doctest::Approx(1.0));
    CHECK(path.steps == 10);
    for (std::size_t i = 1; i < path.size(); ++i) CHECK(path.times[i] > path.times[i - 1]);
}

TEST_CASE("default record stride caps the sample count") {
    for (double t_end : {1.0, 200.0, 800.0, 1234.5}) {
        const auto stride = default_record_stride(0.01, t_end);
        const auto cfg = make_config(0.01, t_end, stride);
        const auto n = step_count(cfg);
        const auto samples = n / stride + 1 + (n % stride != 0 ? 1 : 0);
        CHECK(samples <= 10'000);
        if (stride > 1) CHECK(n / (stride - 1) + 1 > 10'000 - 1);
    }
}

TEST_CASE("same inputs give bitwise identical paths") {
    const auto s = preset_schedule("example-4-3");
    const auto c = make_config(0.01, 20.0, 10, 77);
    const Path a = simulate_path(preset_init(), s, c, 5);
    const Path b = simulate_path(preset_init(), s, c, 5);
    CHECK(a == b);
    CHECK(a.path_index == 5);
    CHECK_FALSE(a == simulate_path(preset_init(), s, c, 6));
}

TEST_CASE("disease-free subspace is invariant") {
    State x = State::Zero();
    x(S_h) = 90.0;
    x(S_r) = 80.0;
    const auto path = simulate_path(x, preset_schedule("example-4-3"), make_config(0.01, 50.0, 5), 0);
    for (const auto& s : path.states) {
        CHECK(s(I_h) == 0.0);
        CHECK(s(Q_h) == 0.0);
        CHECK(s(R_h) == 0.0);
        CHECK(s(I_r) == 0.0);
    }
}

TEST_CASE("domain breakdown aborts with the failing time") {
    State x = State::Zero();
    x(S_r) = 5.0;
    x(I_r) = 1.0;
    x(S_h) = 1.0;
    Params k = preset_params("example-4-2");
    k.theta_h = 0.0;
    k.eta1 = k.eta2 = 0.0;
    k.mu_h = 5.0; // the first step overshoots S_h below zero and it is projected away
    const auto s = ParamSchedule::constant(k, NoiseIntensities{});
    SimConfig c = make_config(0.5, 100.0);
    try {
        (void)simulate_path(x, s, c, 0);
        FAIL("expected DomainError");
    } catch (const DomainError& e) {
        REQUIRE(e.time().has_value());
        CHECK(*e.time() == doctest::Approx(0.5));
    }
}

TEST_CASE("disease-free rodent-free equilibrium is stationary under RK4") {
    Params k = preset_params("example-4-2");
    k.theta_r = 0.0;
    State x = State::Zero();
    x(S_h) = k.theta_h / k.mu_h;
    const auto path = simulate_ode(x, ParamSchedule::constant(k, NoiseIntensities{}), make_config(0.01, 100.0, 100));
    for (const auto& s : path.states) CHECK(s(S_h) == doctest::Approx(200.0).epsilon(1e-13));
}

TEST_CASE("RK4 reference: infected humans decay monotonically once past the transient") {
    const auto s = preset_schedule("example-4-2", false);
    const auto coarse = simulate_ode(preset_init(), s, make_config(0.01, 40.0, 100));
    const auto fine = simulate_ode(preset_init(), s, make_config(1e-4, 40.0, 10'000));
    REQUIRE(coarse.size() == fine.size());
    for (std::size_t i = 0; i < coarse.size(); ++i)
        for (int c = 0; c < kStateDim; ++c)
            CHECK(coarse.states[i](c) == doctest::Approx(fine.states[i](c)).epsilon(1e-9));

    std::size_t peak = 0;
    for (std::size_t i = 0; i < coarse.size(); ++i)
        if (coarse.states[i](I_h) > coarse.states[peak](I_h)) peak = i;
    for (std::size_t i = peak + 1; i < coarse.size(); ++i) CHECK(coarse.states[i](I_h) < coarse.states[i - 1](I_h));
}

TEST_CASE("RK4 step halving changes the terminal state negligibly") {
    for (const char* name : {"example-4-2", "example-4-3"}) {
        const auto s = preset_schedule(name, false);
        const auto a = simulate_ode(preset_init(), s, make_config(1e-2, 200.0, 1000));
        const auto b = simulate_ode(preset_init(), s, make_config(5e-3, 200.0, 2000));
        const double rel = (a.states.back() - b.states.back()).cwiseAbs().maxCoeff() /
                           b.states.back().cwiseAbs().maxCoeff();
        CHECK(rel < 1e-6);
    }
}

TEST_CASE("coupled increments drive a custom EM integration") {
    const auto s = preset_schedule("example-4-2");
    const auto c = make_config(0.01, 5.0, 1, 9);
    const auto direct = simulate_path(preset_init(), s, c, 3);
    const auto custom = integrate_em(preset_init(), s, c, [&](std::int64_t k) {
        return brownian_increments(9, 3, static_cast<std::uint64_t>(k), 0.01);
    });
    CHECK(direct.states == custom.states);
}

TEST_CASE("host ratio over a simulated path") {
    const auto path = simulate_path(preset_init(), preset_schedule("example-4-2"), make_config(0.01, 10.0, 10), 0);
    const auto r = check_hr(path, 10.0);
    CHECK(r.satisfied);
    CHECK(r.max_ratio > 0.4);
}
