// ellipfuse CLI: fuse ellipsoid pairs, run the collaborative bearing
// localization scenario, drive Monte Carlo batches, and search for fusion
// set-property counterexamples.
//
// Exit codes: 0 success, 2 configuration/validation error, 3 I/O error,
// 4 numerical error (disjoint priors surfaced from `fuse`).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ellipfuse/config.hpp"
#include "ellipfuse/counterexample.hpp"
#include "ellipfuse/csv.hpp"
#include "ellipfuse/montecarlo.hpp"

namespace {

using namespace ellipfuse;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;

AlphaCriterion parse_criterion(const std::string& s) {
    if (s == "det") return AlphaCriterion::min_determinant;
    if (s == "trace") return AlphaCriterion::min_trace;
    throw ParameterError("criterion must be 'det' or 'trace'");
}

FusionMethod parse_fuse_method(const std::string& s) {
    if (s == "kalman") return FusionMethod::kalman;
    if (s == "ci") return FusionMethod::ci;
    if (s == "ici") return FusionMethod::ici;
    if (s == "cce") return FusionMethod::cce;
    throw ParameterError("method must be one of kalman|ci|ici|cce");
}

int cmd_fuse(const std::string& config_path, const std::string& method_name,
             std::optional<double> alpha, const std::string& criterion_name) {
    const FusionMethod method = parse_fuse_method(method_name);
    const AlphaCriterion criterion = parse_criterion(criterion_name);
    const auto pair = load_ellipsoid_pair(config_path);
    const Ellipsoid& ei = pair.first;
    const Ellipsoid& ej = pair.second;

    FusionOutcome outcome = [&] {
        if (method == FusionMethod::kalman) return kalman_fuse(ei, ej);
        if (alpha.has_value()) return fuse(method, ei, ej, *alpha);
        return fuse_optimal(method, ei, ej, criterion);
    }();

    json out{{"method", method_name},
             {"estimate", to_json(outcome.estimate)},
             {"k", outcome.k},
             {"d_m", outcome.mahalanobis},
             {"overlapping", outcome.mahalanobis <= 2.0}};
    if (method != FusionMethod::kalman) {
        out["alpha"] = outcome.alpha;
        out["alpha_optimized"] = !alpha.has_value();
        out["criterion"] = criterion_name;
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

ScenarioConfig load_scenario(const std::string& path) {
    AnyConfig config = load_config(path);
    if (!std::holds_alternative<ScenarioConfig>(config)) {
        throw ConfigError("/", "expected a scenario config (no 'runs' field)");
    }
    return std::get<ScenarioConfig>(std::move(config));
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
    const ScenarioConfig scenario = load_scenario(config_path);

    std::vector<StepRecord> all;
    std::optional<std::uint64_t> noise_checksum;
    for (const MethodSpec& method : scenario.methods) {
        RunResult rr = run_scenario(scenario, method, scenario.seed);
        if (!noise_checksum) {
            noise_checksum = rr.noise_checksum;
        } else if (*noise_checksum != rr.noise_checksum) {
            throw Error("simulate: methods consumed different noise streams");
        }
        all.insert(all.end(), rr.records.begin(), rr.records.end());
    }

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::string csv_path = out_dir + "/steps.csv";
    write_step_csv_file(csv_path, all);
    std::cout << "wrote " << csv_path << " (" << all.size() << " rows, noise checksum "
              << *noise_checksum << ")\n";
    return kExitOk;
}

int cmd_montecarlo(const std::string& config_path, const std::string& out_dir,
                   std::optional<int> runs_override, std::optional<std::uint64_t> seed_override) {
    AnyConfig any = load_config(config_path);
    if (!std::holds_alternative<MonteCarloConfig>(any)) {
        throw ConfigError("/", "expected a monte carlo config (with 'runs' and 'base')");
    }
    MonteCarloConfig config = std::get<MonteCarloConfig>(std::move(any));
    if (runs_override) {
        if (*runs_override < 1) throw ConfigError("/runs", "must be >= 1");
        config.runs = *runs_override;
    }
    if (seed_override) config.base.seed = *seed_override;

    const MonteCarloResult result = run_montecarlo(config);
    write_montecarlo_csvs(result, out_dir);
    std::uint64_t digest = 0xCBF29CE484222325ULL;
    for (std::uint64_t cs : result.noise_checksums) digest = (digest ^ cs) * 0x100000001B3ULL;
    std::cout << "wrote " << out_dir << "/mc_runs.csv, mc_summary.csv, mc_histogram.csv ("
              << config.runs << " runs, " << worker_count() << " worker cap, noise digest "
              << digest << ")\n";
    for (const SummaryRecord& s : result.summaries) {
        std::cout << "  " << s.method << " agent " << s.agent_id
                  << ": median " << format_double(s.median) << " m, mean "
                  << format_double(s.mean) << " m\n";
    }
    return kExitOk;
}

int cmd_counterexample(int trials, std::uint64_t seed, const std::optional<std::string>& out_dir) {
    const SearchReport report = run_counterexample_search(trials, seed);
    const json j = to_json(report);
    std::cout << j.dump(2) << '\n';
    if (out_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*out_dir, ec);
        const std::string path = *out_dir + "/counterexample.json";
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + path);
        out << j.dump(2) << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"safe fusion of correlated ellipsoidal estimates and collaborative "
                 "bearing-only target localization"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string method = "cce";
    std::string criterion = "det";
    std::optional<double> alpha;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;

    CLI::App* fuse_cmd = app.add_subcommand("fuse", "fuse an ellipsoid pair from a JSON file");
    fuse_cmd->add_option("--config", config_path, "path to {\"ei\":..., \"ej\":...} JSON")
        ->required();
    fuse_cmd->add_option("--method", method, "kalman|ci|ici|cce")->required();
    fuse_cmd->add_option("--alpha", alpha, "fixed parameter; omit to optimize");
    fuse_cmd->add_option("--criterion", criterion, "det|trace (default det)");

    CLI::App* sim_cmd = app.add_subcommand("simulate", "run the scenario once per method");
    sim_cmd->add_option("--config", config_path, "scenario JSON")->required();
    sim_cmd->add_option("--out", out_dir, "output directory (default ./out)");

    CLI::App* mc_cmd = app.add_subcommand("montecarlo", "randomized batch of scenario runs");
    mc_cmd->add_option("--config", config_path, "monte carlo JSON")->required();
    mc_cmd->add_option("--out", out_dir, "output directory (default ./out)");
    mc_cmd->add_option("--runs", runs, "override the configured run count");
    mc_cmd->add_option("--seed", seed, "override the configured seed");

    CLI::App* cx_cmd = app.add_subcommand(
        "counterexample", "search random pairs for CI/ICI set-property violations");
    int trials = 1000;
    std::uint64_t cx_seed = 1;
    std::optional<std::string> cx_out;
    cx_cmd->add_option("--runs", trials, "number of random pairs to audit (default 1000)");
    cx_cmd->add_option("--seed", cx_seed, "RNG seed (default 1)");
    cx_cmd->add_option("--out", cx_out, "also write counterexample.json here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fuse_cmd->parsed()) return cmd_fuse(config_path, method, alpha, criterion);
        if (sim_cmd->parsed()) return cmd_simulate(config_path, out_dir);
        if (mc_cmd->parsed()) return cmd_montecarlo(config_path, out_dir, runs, seed);
        if (cx_cmd->parsed()) return cmd_counterexample(trials, cx_seed, cx_out);
    } catch (const DisjointSetsError& e) {
        std::cerr << nlohmann::json{{"error", "disjoint-sets"}, {"detail", e.what()}}.dump()
                  << '\n';
        return kExitNumeric;
    } catch (const ConfigError& e) {
        std::cerr << nlohmann::json{{"error", "config"}, {"path", e.path()},
                                    {"detail", e.what()}}
                         .dump()
                  << '\n';
        return kExitConfig;
    } catch (const ParameterError& e) {
        std::cerr << nlohmann::json{{"error", "parameter"}, {"detail", e.what()}}.dump() << '\n';
        return kExitConfig;
    } catch (const InvalidMatrixError& e) {
        std::cerr << nlohmann::json{{"error", "invalid-matrix"}, {"detail", e.what()}}.dump()
                  << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << nlohmann::json{{"error", "io"}, {"detail", e.what()}}.dump() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", "internal"}, {"detail", e.what()}}.dump() << '\n';
        return 1;
    }
    return kExitOk;
}
