#include <mpox/scenario.hpp>

#include <openssl/evp.h>

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mpox {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return out.str();
}

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string timeseries_csv(const EnsembleResult& e) {
    std::string out = "t_days";
    for (auto name : kCompartmentNames) {
        out += ",";
        out += name;
        out += "_mean,";
        out += name;
        out += "_std";
    }
    out += "\n";
    for (std::size_t s = 0; s < e.times.size(); ++s) {
        out += format_double(e.times[s]);
        for (int c = 0; c < kStateDim; ++c) {
            out += ",";
            out += format_double(e.mean_series[s](c));
            out += ",";
            out += format_double(e.std_series[s](c));
        }
        out += "\n";
    }
    return out;
}

std::string paths_csv(const EnsembleResult& e) {
    std::string out = "path_index,t_days,compartment,value\n";
    for (const auto& p : e.paths) {
        const std::string idx = std::to_string(p.path_index);
        for (std::size_t s = 0; s < p.times.size(); ++s) {
            const std::string t = format_double(p.times[s]);
            for (int c = 0; c < kStateDim; ++c) {
                out += idx;
                out += ",";
                out += t;
                out += ",";
                out += kCompartmentNames[c];
                out += ",";
                out += format_double(p.states[s](c));
                out += "\n";
            }
        }
    }
    return out;
}

std::string histogram_csv(const Histogram& h) {
    std::string out = "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out += format_double(h.bin_edges[b]);
        out += ",";
        out += format_double(h.bin_edges[b + 1]);
        out += ",";
        out += std::to_string(h.counts[b]);
        out += "\n";
    }
    return out;
}

Json to_json(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(x);
    return a;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

} // namespace

Json analysis_report(const RunSpec& spec, const EnsembleResult& ensemble) {
    const auto& a = spec.analysis;
    const double horizon = spec.sim.t_end;
    const Params p0 = eval_schedule(spec.schedule, 0.0).first;
    Json report = Json::object();

    const auto threshold = r0_constant(p0);
    report["threshold"] = {{"r0", threshold.r0},
                           {"numerator", threshold.numerator},
                           {"denominator", threshold.denominator},
                           {"regime", std::string(to_string(threshold.regime))},
                           {"evaluated_at_t", 0.0},
                           {"time_varying", !spec.schedule.is_constant()}};

    try {
        const auto ext = extinction_rate(ensemble, a.window, p0);
        Json indices = Json::array();
        for (auto i : ext.path_indices) indices.push_back(i);
        report["extinction_rate"] = {{"window", Json::array({a.window.lo, a.window.hi})},
                                     {"median_slope", ext.median_slope},
                                     {"theory_bound", ext.theory_bound},
                                     {"included_paths", ext.slope_per_path.size()},
                                     {"excluded_paths", ext.excluded_paths},
                                     {"path_index", indices},
                                     {"slope_per_path", to_json(ext.slope_per_path)}};
    } catch (const InsufficientData& e) {
        report["extinction_rate"] = {{"window", Json::array({a.window.lo, a.window.hi})}, {"error", e.what()}};
    }

    const auto indicator = timevarying_extinction_indicator(spec.schedule, horizon);
    report["extinction_indicator"] = {{"horizon", horizon},
                                      {"lhs_avg", indicator.lhs_avg},
                                      {"rhs_avg", indicator.rhs_avg},
                                      {"satisfied", indicator.satisfied}};

    const auto growth = growth_bound(spec.schedule, horizon, a.lyapunov);
    report["growth_bound"] = {{"horizon", horizon},
                              {"lyapunov", a.lyapunov_is_log1p ? "log1p" : "custom"},
                              {"a", growth.a},
                              {"b", growth.b},
                              {"c", growth.c},
                              {"d", growth.d},
                              {"c1_tilde", growth.c1_tilde},
                              {"c2_tilde", growth.c2_tilde},
                              {"damping_sq", growth.damping_sq},
                              {"bound", growth.bound}};

    const auto series = xi_series_check(spec.schedule, a.n_max, a.series_tol);
    report["series_check"] = {{"n_max", a.n_max},
                              {"terms", to_json(series.terms)},
                              {"partial_sums", to_json(series.partial_sums)},
                              {"limit_estimate", series.limit_estimate},
                              {"classification", std::string(to_string(series.classification))}};

    const auto bounded = boundedness_stats(ensemble, a.kappa, a.chi);
    report["boundedness"] = {{"kappa", a.kappa},
                             {"chi", a.chi},
                             {"samples", bounded.samples},
                             {"p_exceed_kappa", bounded.p_exceed_kappa},
                             {"p_at_least_kappa", bounded.p_at_least_kappa},
                             {"p_within_chi", bounded.p_within_chi}};

    double max_ratio = 0.0;
    for (const auto& path : ensemble.paths) max_ratio = std::max(max_ratio, check_hr(path, a.kbar).max_ratio);
    report["host_ratio"] = {{"kbar", a.kbar}, {"max_ratio", max_ratio}, {"satisfied", max_ratio <= a.kbar}};

    std::uint64_t events = 0;
    std::uint64_t steps = 0;
    for (const auto& path : ensemble.paths) {
        events += path.projection_events;
        steps += path.steps;
    }
    Json aborted = Json::array();
    for (const auto& ab : ensemble.aborted)
        aborted.push_back({{"path_index", ab.path_index}, {"time", ab.time}, {"reason", ab.reason}});
    std::ostringstream digest_hex;
    digest_hex << std::hex << std::setw(16) << std::setfill('0') << ensemble.schedule_digest;
    report["ensemble"] = {{"seed", ensemble.seed},
                          {"n_paths", ensemble.n_paths},
                          {"surviving_paths", ensemble.paths.size()},
                          {"aborted", aborted},
                          {"schedule_digest", digest_hex.str()},
                          {"projection_events", events},
                          {"total_steps", steps},
                          {"projection_rate", steps > 0 ? double(events) / double(steps) : 0.0},
                          {"positivity_policy", std::string(to_string(spec.sim.positivity_policy))},
                          {"std_convention", "population"}};
    return report;
}

ScenarioResult run_scenario(const RunSpec& spec, const RunOptions& options) {
    validate(spec);
    const std::string started = utc_now();
    fs::create_directories(options.out_dir);

    ScenarioResult result;
    result.ensemble = run_ensemble(spec.init, spec.schedule, spec.sim, spec.n_paths, {options.threads});
    result.analysis = analysis_report(spec, result.ensemble);

    Json checksums = Json::object();
    auto emit = [&](const std::string& name, const std::string& bytes) {
        const fs::path path = options.out_dir / name;
        write_file(path, bytes);
        checksums[name] = sha256_hex(bytes);
        result.files.push_back(path);
    };

    emit("timeseries.csv", timeseries_csv(result.ensemble));
    if (spec.output.paths_csv) emit("paths.csv", paths_csv(result.ensemble));
    const double hist_t = spec.output.histogram_t.value_or(result.ensemble.times.back());
    for (const auto& name : spec.output.histograms) {
        const auto h = histogram(result.ensemble, compartment_index(name), hist_t, spec.output.histogram_bins);
        emit("histogram_" + name + ".csv", histogram_csv(h));
    }
    emit("analysis.json", result.analysis.dump(2) + "\n");

    const std::string spec_text = serialize(spec).dump();
    Json manifest = {{"spec_digest", sha256_hex(spec_text)},
                     {"seed", spec.sim.seed},
                     {"tool_version", MPOX_VERSION},
                     {"start_time", started},
                     {"end_time", utc_now()},
                     {"outputs", checksums}};
    const fs::path manifest_path = options.out_dir / "manifest.json";
    write_file(manifest_path, manifest.dump(2) + "\n");
    result.files.push_back(manifest_path);
    return result;
}

} // namespace mpox
