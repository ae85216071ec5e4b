#include <mpox/config.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace mpox {

namespace {

// Walks a JSON object, tracking its path and the keys consumed so far.
class ObjectReader {
public:
    ObjectReader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw SchemaError(path_, "expected an object");
    }

    std::string child_path(std::string_view key) const { return path_ + "." + std::string(key); }

    bool has(std::string_view key) const { return node_.contains(std::string(key)); }

    const Json& require(std::string_view key) {
        const std::string k(key);
        if (!node_.contains(k)) throw SchemaError(child_path(key), "required field is missing");
        seen_.insert(k);
        return node_.at(k);
    }

    const Json* optional(std::string_view key) {
        const std::string k(key);
        if (!node_.contains(k)) return nullptr;
        seen_.insert(k);
        return &node_.at(k);
    }

    double number(std::string_view key) { return as_number(require(key), child_path(key)); }

    // Rejects keys that were never consumed.
    void finish() const {
        for (const auto& item : node_.items())
            if (!seen_.count(item.key())) throw SchemaError(child_path(item.key()), "unknown key");
    }

    static double as_number(const Json& v, const std::string& path) {
        if (!v.is_number()) throw SchemaError(path, "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw SchemaError(path, "expected a finite number");
        return d;
    }

    static std::uint64_t as_unsigned(const Json& v, const std::string& path) {
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
        throw SchemaError(path, "expected a non-negative integer");
    }

    static bool as_bool(const Json& v, const std::string& path) {
        if (!v.is_boolean()) throw SchemaError(path, "expected true or false");
        return v.get<bool>();
    }

private:
    const Json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

PiecewiseLinear parse_schedule(const Json& v, const std::string& path) {
    if (v.is_number()) return PiecewiseLinear(ObjectReader::as_number(v, path));
    ObjectReader r(v, path);
    const Json& knots = r.require("knots");
    const std::string kpath = r.child_path("knots");
    if (!knots.is_array() || knots.empty()) throw SchemaError(kpath, "expected a nonempty array of [t, value]");
    std::vector<Knot> out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const std::string ipath = kpath + "[" + std::to_string(i) + "]";
        const Json& k = knots[i];
        if (!k.is_array() || k.size() != 2) throw SchemaError(ipath, "expected [t, value]");
        out.push_back({ObjectReader::as_number(k[0], ipath + "[0]"), ObjectReader::as_number(k[1], ipath + "[1]")});
    }
    r.finish();
    try {
        return PiecewiseLinear(std::move(out));
    } catch (const ValidationError& e) {
        throw ValidationError(kpath + ": " + e.what());
    }
}

Json schedule_to_json(const PiecewiseLinear& f) {
    if (f.is_constant() && f.knots().front().t == 0.0) return f.knots().front().value;
    Json knots = Json::array();
    for (const auto& k : f.knots()) knots.push_back(Json::array({k.t, k.value}));
    return Json{{"knots", knots}};
}

LyapunovShape parse_lyapunov(const Json& v, const std::string& path, bool& is_log1p) {
    if (v.is_string()) {
        if (v.get<std::string>() != "log1p") throw SchemaError(path, "expected \"log1p\" or a constants object");
        is_log1p = true;
        return LyapunovShape::log1p();
    }
    ObjectReader r(v, path);
    LyapunovShape shape{r.number("sup_abs_dF"), r.number("c1_tilde"), r.number("c2_tilde")};
    r.finish();
    if (shape.sup_abs_dF < 0.0 || shape.c1_tilde < 0.0 || shape.c2_tilde < 0.0)
        throw ValidationError(path + ": Lyapunov sup-constants must be >= 0");
    is_log1p = false;
    return shape;
}

} // namespace

RunSpec parse_config(std::string_view text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError("$", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

RunSpec parse_config(const Json& doc) {
    RunSpec spec;
    ObjectReader root(doc, "$");

    {
        ObjectReader model(root.require("model"), "$.model");
        ObjectReader params(model.require("params"), "$.model.params");
        const auto fields = param_fields();
        for (int i = 0; i < kParamCount; ++i) {
            const auto name = fields[i].first;
            spec.schedule.params[i] = parse_schedule(params.require(name), params.child_path(name));
        }
        params.finish();
        ObjectReader noise(model.require("noise"), "$.model.noise");
        for (int i = 0; i < kNoiseDim; ++i) {
            const std::string name = "sigma" + std::to_string(i + 1);
            spec.schedule.sigma[i] = parse_schedule(noise.require(name), noise.child_path(name));
        }
        noise.finish();
        model.finish();
    }

    {
        ObjectReader init(root.require("init"), "$.init");
        for (int i = 0; i < kStateDim; ++i) spec.init(i) = init.number(kCompartmentNames[i]);
        init.finish();
    }

    {
        ObjectReader sim(root.require("sim"), "$.sim");
        spec.sim.dt = sim.number("dt");
        spec.sim.t_end = sim.number("t_end");
        spec.sim.seed = ObjectReader::as_unsigned(sim.require("seed"), "$.sim.seed");
        spec.n_paths = ObjectReader::as_unsigned(sim.require("n_paths"), "$.sim.n_paths");
        if (const Json* v = sim.optional("positivity_policy")) {
            if (!v->is_string()) throw SchemaError("$.sim.positivity_policy", "expected a string");
            spec.sim.positivity_policy = positivity_policy_from_string(v->get<std::string>());
        }
        if (const Json* v = sim.optional("guard_eps")) spec.sim.guard_eps = ObjectReader::as_number(*v, "$.sim.guard_eps");
        if (const Json* v = sim.optional("record_stride")) {
            spec.sim.record_stride =
                static_cast<std::int64_t>(ObjectReader::as_unsigned(*v, "$.sim.record_stride"));
        } else if (spec.sim.dt > 0.0 && spec.sim.t_end >= spec.sim.dt) {
            spec.sim.record_stride = default_record_stride(spec.sim.dt, spec.sim.t_end);
        }
        sim.finish();
    }

    // Defaults that depend on the model and horizon.
    const Params p0 = eval_schedule(spec.schedule, 0.0).first;
    spec.analysis.window = {0.25 * spec.sim.t_end, spec.sim.t_end};
    const bool has_default_kappa = p0.mu_h > 0.0 && p0.mu_r > 0.0;
    if (has_default_kappa) spec.analysis.kappa = 10.0 * (p0.theta_h / p0.mu_h + p0.theta_r / p0.mu_r);
    bool chi_given = false;
    bool kappa_given = false;

    if (const Json* node = root.optional("analysis")) {
        ObjectReader a(*node, "$.analysis");
        if (const Json* w = a.optional("window")) {
            if (!w->is_array() || w->size() != 2) throw SchemaError("$.analysis.window", "expected [t_lo, t_hi]");
            spec.analysis.window = {ObjectReader::as_number((*w)[0], "$.analysis.window[0]"),
                                    ObjectReader::as_number((*w)[1], "$.analysis.window[1]")};
        }
        if (const Json* v = a.optional("kappa")) {
            spec.analysis.kappa = ObjectReader::as_number(*v, "$.analysis.kappa");
            kappa_given = true;
        }
        if (const Json* v = a.optional("chi")) {
            spec.analysis.chi = ObjectReader::as_number(*v, "$.analysis.chi");
            chi_given = true;
        }
        if (const Json* v = a.optional("lyapunov"))
            spec.analysis.lyapunov = parse_lyapunov(*v, "$.analysis.lyapunov", spec.analysis.lyapunov_is_log1p);
        if (const Json* v = a.optional("n_max"))
            spec.analysis.n_max = static_cast<int>(ObjectReader::as_unsigned(*v, "$.analysis.n_max"));
        if (const Json* v = a.optional("series_tol"))
            spec.analysis.series_tol = ObjectReader::as_number(*v, "$.analysis.series_tol");
        if (const Json* v = a.optional("kbar")) spec.analysis.kbar = ObjectReader::as_number(*v, "$.analysis.kbar");
        a.finish();
    }
    if (!kappa_given && !has_default_kappa)
        throw SchemaError("$.analysis.kappa", "required when mu_h or mu_r is zero at t = 0");
    if (!chi_given) spec.analysis.chi = spec.analysis.kappa;

    if (const Json* node = root.optional("output")) {
        ObjectReader o(*node, "$.output");
        if (const Json* v = o.optional("directory")) {
            if (!v->is_string()) throw SchemaError("$.output.directory", "expected a string");
            spec.output.directory = v->get<std::string>();
        }
        if (const Json* v = o.optional("paths_csv")) spec.output.paths_csv = ObjectReader::as_bool(*v, "$.output.paths_csv");
        if (const Json* v = o.optional("histograms")) {
            if (!v->is_array()) throw SchemaError("$.output.histograms", "expected an array of compartment names");
            for (std::size_t i = 0; i < v->size(); ++i) {
                const std::string ipath = "$.output.histograms[" + std::to_string(i) + "]";
                const Json& name = (*v)[i];
                if (!name.is_string() || compartment_index(name.get<std::string>()) < 0)
                    throw SchemaError(ipath, "expected one of S_h, I_h, Q_h, R_h, S_r, I_r");
                spec.output.histograms.push_back(name.get<std::string>());
            }
        }
        if (const Json* v = o.optional("histogram_bins"))
            spec.output.histogram_bins = static_cast<int>(ObjectReader::as_unsigned(*v, "$.output.histogram_bins"));
        if (const Json* v = o.optional("histogram_t"))
            spec.output.histogram_t = ObjectReader::as_number(*v, "$.output.histogram_t");
        o.finish();
    }
    root.finish();

    validate(spec);
    return spec;
}

void validate(const RunSpec& spec) {
    validate(spec.schedule);
    try {
        validate(spec.init);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("init: ") + e.what());
    }
    if (!(human_total(spec.init) >= spec.sim.guard_eps))
        throw ValidationError("init: N_h must be positive");
    validate(spec.sim);
    if (spec.n_paths < 1) throw ValidationError("sim.n_paths must be >= 1");

    const auto& a = spec.analysis;
    if (!(a.window.lo >= 0.0 && a.window.hi > a.window.lo && a.window.hi <= spec.sim.t_end))
        throw ValidationError("analysis.window must satisfy 0 <= lo < hi <= sim.t_end");
    if (!(a.kappa > 0.0)) throw ValidationError("analysis.kappa must be > 0");
    if (!(a.chi > 0.0)) throw ValidationError("analysis.chi must be > 0");
    if (a.n_max < 4) throw ValidationError("analysis.n_max must be >= 4");
    if (a.n_max > 60) throw ValidationError("analysis.n_max must be <= 60");
    if (!(a.series_tol >= 0.0)) throw ValidationError("analysis.series_tol must be >= 0");
    if (!(a.kbar > 0.0)) throw ValidationError("analysis.kbar must be > 0");
    if (spec.output.histogram_bins < 1) throw ValidationError("output.histogram_bins must be >= 1");
}

Json serialize(const RunSpec& spec) {
    Json params = Json::object();
    const auto fields = param_fields();
    for (int i = 0; i < kParamCount; ++i) params[std::string(fields[i].first)] = schedule_to_json(spec.schedule.params[i]);
    Json noise = Json::object();
    for (int i = 0; i < kNoiseDim; ++i) noise["sigma" + std::to_string(i + 1)] = schedule_to_json(spec.schedule.sigma[i]);

    Json init = Json::object();
    for (int i = 0; i < kStateDim; ++i) init[std::string(kCompartmentNames[i])] = spec.init(i);

    Json sim = {{"dt", spec.sim.dt},
                {"t_end", spec.sim.t_end},
                {"seed", spec.sim.seed},
                {"n_paths", spec.n_paths},
                {"positivity_policy", std::string(to_string(spec.sim.positivity_policy))},
                {"guard_eps", spec.sim.guard_eps},
                {"record_stride", spec.sim.record_stride}};

    const auto& a = spec.analysis;
    Json lyapunov = a.lyapunov_is_log1p
                        ? Json("log1p")
                        : Json{{"sup_abs_dF", a.lyapunov.sup_abs_dF},
                               {"c1_tilde", a.lyapunov.c1_tilde},
                               {"c2_tilde", a.lyapunov.c2_tilde}};
    Json analysis = {{"window", Json::array({a.window.lo, a.window.hi})},
                     {"kappa", a.kappa},
                     {"chi", a.chi},
                     {"lyapunov", lyapunov},
                     {"n_max", a.n_max},
                     {"series_tol", a.series_tol},
                     {"kbar", a.kbar}};

    Json output = {{"directory", spec.output.directory},
                   {"paths_csv", spec.output.paths_csv},
                   {"histograms", spec.output.histograms},
                   {"histogram_bins", spec.output.histogram_bins}};
    if (spec.output.histogram_t) output["histogram_t"] = *spec.output.histogram_t;

    return Json{{"model", {{"params", params}, {"noise", noise}}},
                {"init", init},
                {"sim", sim},
                {"analysis", analysis},
                {"output", output}};
}

std::vector<std::string> preset_names() { return {"example-4-2", "example-4-3"}; }

Params preset_params(std::string_view name) {
    Params k;
    k.theta_q = 0.043;
    k.theta_h = 10.0;
    k.p = 0.041;
    k.eta1 = 0.009;
    k.eta2 = 0.002;
    k.mu_h = 0.05;
    k.delta_h = 0.003;
    k.zeta = 0.5;
    k.gamma_h = 0.2;
    k.theta_r = 10.0;
    k.mu_r = 0.02;
    k.delta_r = 0.004;
    if (name == "example-4-2") k.eta3 = 0.0027;
    else if (name == "example-4-3") k.eta3 = 0.027;
    else throw ValidationError("unknown preset '" + std::string(name) + "' (expected example-4-2 or example-4-3)");
    return k;
}

NoiseIntensities preset_noise() {
    NoiseIntensities n;
    n.sigma << 0.05, 0.04, 0.01, 0.05, 0.04, 0.01, 0.05, 0.04;
    return n;
}

State preset_init() {
    State x;
    x(S_h) = 90.0;
    x(I_h) = 60.0;
    x(Q_h) = 50.0;
    x(R_h) = 70.0;
    x(S_r) = 80.0;
    x(I_r) = 30.0;
    return x;
}

RunSpec preset(std::string_view name) {
    const Params k = preset_params(name);
    RunSpec spec;
    spec.schedule = ParamSchedule::constant(k, preset_noise());
    spec.init = preset_init();
    spec.sim.dt = 0.01;
    spec.sim.t_end = name == "example-4-2" ? 200.0 : 800.0;
    spec.sim.seed = 20240917;
    spec.sim.record_stride = default_record_stride(spec.sim.dt, spec.sim.t_end);
    spec.n_paths = 100;
    spec.analysis.window = name == "example-4-2" ? Window{50.0, 200.0} : Window{200.0, 800.0};
    spec.analysis.kappa = 10.0 * (k.theta_h / k.mu_h + k.theta_r / k.mu_r);
    spec.analysis.chi = spec.analysis.kappa;
    spec.output.histograms = {"S_h", "I_h", "Q_h", "R_h", "S_r", "I_r"};
    spec.output.histogram_bins = 30;
    validate(spec);
    return spec;
}

} // namespace mpox
