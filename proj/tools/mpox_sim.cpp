// mpox-sim: command-line front end for scenario runs.
//
//   mpox-sim run <spec.json> [--out DIR] [--seed N] [--paths N] [--threads N]
//   mpox-sim run --preset example-4-2 [...]
//   mpox-sim preset <name>          print a preset as canonical JSON
//
// Exit codes: 0 success, 2 schema/validation error, 3 runtime domain error,
// 1 anything else (I/O, usage).

#include <mpox/scenario.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitDomain = 3;

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic monkeypox transmission simulator"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string preset_name;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::uint64_t paths = 0;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "Run a scenario and write CSV/JSON artifacts");
    run->add_option("spec", spec_path, "JSON run specification");
    run->add_option("--preset", preset_name, "Built-in scenario instead of a spec file")
        ->check(CLI::IsMember(mpox::preset_names()));
    run->add_option("--out", out_dir, "Output directory (default: spec output.directory, $MPOX_OUT_DIR, ./out)");
    auto* seed_opt = run->add_option("--seed", seed, "Override sim.seed");
    auto* paths_opt = run->add_option("--paths", paths, "Override sim.n_paths")->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "Worker threads (0 = all cores); never changes results");

    std::string show_name;
    auto* show = app.add_subcommand("preset", "Print a built-in preset as JSON");
    show->add_option("name", show_name)->required()->check(CLI::IsMember(mpox::preset_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInvalid;
    }

    if (*show) {
        std::cout << mpox::serialize(mpox::preset(show_name)).dump(2) << "\n";
        return kExitOk;
    }

    std::string stage = "config";
    try {
        if (spec_path.empty() == preset_name.empty()) {
            std::cerr << "error [config]: give exactly one of <spec.json> or --preset\n";
            return kExitInvalid;
        }
        mpox::RunSpec spec = preset_name.empty() ? mpox::parse_config(read_text(spec_path)) : mpox::preset(preset_name);
        if (*seed_opt) spec.sim.seed = seed;
        if (*paths_opt) spec.n_paths = paths;
        mpox::validate(spec);

        mpox::RunOptions options;
        options.threads = threads;
        if (!out_dir.empty()) options.out_dir = out_dir;
        else if (!spec.output.directory.empty()) options.out_dir = spec.output.directory;
        else if (const char* env = std::getenv("MPOX_OUT_DIR"); env && *env) options.out_dir = env;
        else options.out_dir = "out";

        stage = "simulation";
        const auto result = mpox::run_scenario(spec, options);
        const auto& threshold = result.analysis["threshold"];
        std::cout << "R0 = " << threshold["r0"].get<double>() << " ("
                  << threshold["regime"].get<std::string>() << "), " << result.ensemble.paths.size() << "/"
                  << spec.n_paths << " paths, outputs in " << options.out_dir.string() << "\n";
        return kExitOk;
    } catch (const mpox::SchemaError& e) {
        std::cerr << "error [" << stage << "]: schema: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const mpox::ValidationError& e) {
        std::cerr << "error [" << stage << "]: validation: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const mpox::DomainError& e) {
        std::cerr << "error [" << stage << "]: domain: " << e.what();
        if (e.time()) std::cerr << " (t = " << *e.time() << ")";
        std::cerr << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error [" << stage << "]: " << e.what() << "\n";
        return kExitOther;
    }
}
