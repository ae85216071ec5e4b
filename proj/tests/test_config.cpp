#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mpox/config.hpp>

#include <fstream>
#include <random>
#include <sstream>

using namespace mpox;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json minimal_doc() {
    return serialize(preset("example-4-2"));
}

template <typename E>
std::string message_of(const Json& doc) {
    try {
        parse_config(doc);
    } catch (const E& e) {
        if constexpr (std::is_same_v<E, SchemaError>) return e.path();
        else return e.what();
    }
    return "<no error>";
}

} // namespace

TEST_CASE("shipped preset files match the built-in presets") {
    for (const auto& name : preset_names()) {
        const auto from_file = parse_config(read_file(std::string(MPOX_PRESET_DIR) + "/" + name + ".json"));
        CHECK(from_file == preset(name));
    }
    CHECK_THROWS_AS(preset("example-9-9"), ValidationError);
}

TEST_CASE("preset contents") {
    const auto s = preset("example-4-3");
    const auto [k, noise] = eval_schedule(s.schedule, 0.0);
    CHECK(k.eta3 == 0.027);
    CHECK(k.theta_q == 0.043);
    CHECK(noise.sigma(7) == 0.04);
    CHECK(s.init(I_r) == 30.0);
    CHECK(s.sim.t_end == 800.0);
    CHECK(s.analysis.kappa == doctest::Approx(10.0 * (10.0 / 0.05 + 10.0 / 0.02)));
    CHECK(s.schedule.is_constant());
}

TEST_CASE("validation errors name the offending field") {
    Json doc = minimal_doc();
    doc["model"]["params"]["p"] = 1.5;
    const std::string msg = message_of<ValidationError>(doc);
    CHECK(msg.find("p must lie in [0,1]") != std::string::npos);

    doc = minimal_doc();
    doc["model"]["params"]["mu_h"] = -0.1;
    CHECK(message_of<ValidationError>(doc).find("mu_h") != std::string::npos);

    doc = minimal_doc();
    doc["init"]["S_h"] = -1.0;
    CHECK(message_of<ValidationError>(doc).find("S_h") != std::string::npos);

    doc = minimal_doc();
    doc["sim"]["dt"] = 0.0;
    CHECK(message_of<ValidationError>(doc).find("dt") != std::string::npos);

    doc = minimal_doc();
    doc["sim"]["positivity_policy"] = "clip";
    CHECK(message_of<ValidationError>(doc).find("positivity") != std::string::npos);

    doc = minimal_doc();
    doc["analysis"]["window"] = Json::array({10.0, 500.0});
    CHECK(message_of<ValidationError>(doc).find("window") != std::string::npos);
}

TEST_CASE("schema errors carry a json path") {
    Json doc = minimal_doc();
    doc["sim"].erase("dt");
    CHECK(message_of<SchemaError>(doc) == "$.sim.dt");

    doc = minimal_doc();
    doc["model"]["params"]["eta4"] = 0.1;
    CHECK(message_of<SchemaError>(doc) == "$.model.params.eta4");

    doc = minimal_doc();
    doc["extra"] = true;
    CHECK(message_of<SchemaError>(doc) == "$.extra");

    doc = minimal_doc();
    doc["model"]["noise"]["sigma3"] = "big";
    CHECK(message_of<SchemaError>(doc) == "$.model.noise.sigma3");

    doc = minimal_doc();
    doc["model"]["params"]["eta1"] = Json{{"knots", Json::array({Json::array({0.0})})}};
    CHECK(message_of<SchemaError>(doc) == "$.model.params.eta1.knots[0]");

    doc = minimal_doc();
    doc["output"]["histograms"] = Json::array({"S_h", "X"});
    CHECK(message_of<SchemaError>(doc) == "$.output.histograms[1]");

    CHECK_THROWS_AS(parse_config(std::string_view("{not json")), SchemaError);
}

TEST_CASE("optional sections take defaults") {
    Json doc = minimal_doc();
    doc.erase("analysis");
    doc.erase("output");
    doc["sim"].erase("record_stride");
    doc["sim"].erase("positivity_policy");
    doc["sim"].erase("guard_eps");
    const auto s = parse_config(doc);
    CHECK(s.analysis.window.lo == 50.0);
    CHECK(s.analysis.window.hi == 200.0);
    CHECK(s.analysis.chi == s.analysis.kappa);
    CHECK(s.analysis.n_max == 20);
    CHECK(s.sim.positivity_policy == PositivityPolicy::project_to_zero);
    CHECK(s.sim.guard_eps == kDefaultGuardEps);
    CHECK(s.sim.record_stride == default_record_stride(0.01, 200.0));
    CHECK(s.output.histograms.empty());
}

TEST_CASE("scalars and knot lists both describe schedules") {
    Json doc = minimal_doc();
    doc["model"]["params"]["p"] = Json{{"knots", Json::array({Json::array({0.0, 0.1}), Json::array({100.0, 0.5})})}};
    const auto s = parse_config(doc);
    CHECK(s.schedule.param(&Params::p)(50.0) == doctest::Approx(0.3));
    CHECK(s.schedule.param(&Params::eta1).is_constant());
    CHECK_FALSE(s.schedule.is_constant());

    doc["model"]["params"]["p"] = Json{{"knots", Json::array({Json::array({10.0, 0.1}), Json::array({5.0, 0.5})})}};
    CHECK_THROWS_AS(parse_config(doc), ValidationError);
    doc["model"]["params"]["p"] = Json{{"knots", Json::array({Json::array({0.0, 0.1}), Json::array({5.0, 1.5})})}};
    CHECK_THROWS_AS(parse_config(doc), ValidationError);
}

TEST_CASE("serialization round-trips random specs") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        RunSpec s = preset(trial % 2 ? "example-4-2" : "example-4-3");
        for (auto& f : s.schedule.params) {
            if (u(rng) < 0.3) f = PiecewiseLinear({{0.0, u(rng)}, {1.0 + 100 * u(rng), u(rng)}});
            else f = u(rng) * 0.1;
        }
        for (auto& f : s.schedule.sigma) f = u(rng) * 0.3;
        s.schedule.param(&Params::mu_h) = 0.01 + u(rng);
        for (int i = 0; i < kStateDim; ++i) s.init(i) = 1000 * u(rng);
        s.sim.dt = 0.001 + u(rng) * 0.1;
        s.sim.seed = rng();
        s.sim.positivity_policy = u(rng) < 0.5 ? PositivityPolicy::reflect : PositivityPolicy::project_to_zero;
        s.n_paths = 1 + rng() % 1000;
        s.analysis.kappa = 1 + u(rng) * 1000;
        s.analysis.chi = 1 + u(rng) * 1000;
        s.analysis.kbar = 0.1 + u(rng);
        if (u(rng) < 0.5) {
            s.analysis.lyapunov_is_log1p = false;
            s.analysis.lyapunov = {u(rng), u(rng), u(rng)};
        }
        s.output.paths_csv = u(rng) < 0.5;
        s.output.histogram_t = u(rng) < 0.5 ? std::optional<double>(100 * u(rng)) : std::nullopt;
        validate(s);
        const auto text = serialize(s).dump();
        const auto back = parse_config(text);
        CHECK(back == s);
        CHECK(serialize(back).dump() == text);
    }
}
