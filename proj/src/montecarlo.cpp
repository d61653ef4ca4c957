#include "ellipfuse/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "ellipfuse/csv.hpp"

namespace ellipfuse {

namespace {

constexpr int kMaxResampleAttempts = 1000;

double draw_until(Rng& rng, double mean, double std, const std::function<bool(double)>& ok,
                  const char* what) {
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const double v = mean + std * rng.normal();
        if (ok(v)) return v;
    }
    throw ParameterError(std::string("monte carlo: could not draw a valid value for ") + what);
}

SensorParams draw_sensor(Rng& rng, const Vec2& pose, const McRandomization& r) {
    const double sigma_deg = draw_until(
        rng, r.sigma_deg_mean, r.sigma_deg_std, [](double v) { return v > 0.0 && v < 90.0; },
        "sigma_deg");
    for (int attempt = 0; attempt < kMaxResampleAttempts; ++attempt) {
        const double r_min = draw_until(rng, r.r_min_mean, r.r_min_std,
                                        [](double v) { return v > 0.0; }, "r_min");
        const double r_max = draw_until(rng, r.r_max_mean, r.r_max_std,
                                        [](double v) { return v > 0.0; }, "r_max");
        if (r_min < r_max) {
            return SensorParams::from_degrees(pose, r_min, r_max, sigma_deg);
        }
    }
    throw ParameterError("monte carlo: could not draw a valid range band");
}

} // namespace

ScenarioConfig randomize_scenario(const MonteCarloConfig& config, int run_index) {
    Rng rng = Rng::stream(config.base.seed, StreamPurpose::monte_carlo_params,
                          static_cast<std::uint64_t>(run_index));
    ScenarioConfig scenario = config.base;
    const McRandomization& r = config.randomization;
    for (AgentConfig& agent : scenario.agents) {
        const double gamma = draw_until(rng, r.gamma_mean, r.gamma_std,
                                        [](double v) { return v > 0.0; }, "gamma");
        const Vec2 offset{gamma * rng.normal(), gamma * rng.normal()};
        agent.initial_estimate =
            Ellipsoid(scenario.target + offset, SpdMatrix2::isotropic(gamma * gamma));
        agent.sensor = draw_sensor(rng, agent.sensor.pose, r);
    }
    return scenario;
}

int worker_count() {
    const char* env = std::getenv("ELLIPFUSE_THREADS");
    if (env != nullptr) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

double percentile(std::vector<double> values, double p) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double rank = p / 100.0 * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

MonteCarloResult run_montecarlo(const MonteCarloConfig& config) {
    struct PerRun {
        std::vector<McRunRecord> records;
        std::uint64_t noise_checksum = 0;
    };
    std::vector<PerRun> per_run(static_cast<std::size_t>(config.runs));

    const auto simulate_run = [&](int run_index) {
        const ScenarioConfig scenario = randomize_scenario(config, run_index);
        const std::uint64_t run_seed = derive_seed(config.base.seed,
                                                   StreamPurpose::monte_carlo_run,
                                                   static_cast<std::uint64_t>(run_index));
        PerRun out;
        bool first_method = true;
        for (const MethodSpec& method : scenario.methods) {
            const RunResult rr = run_scenario(scenario, method, run_seed, run_index);
            if (first_method) {
                out.noise_checksum = rr.noise_checksum;
                first_method = false;
            } else if (rr.noise_checksum != out.noise_checksum) {
                throw Error("monte carlo: methods consumed different noise streams");
            }
            const std::size_t n_agents = scenario.agents.size();
            for (std::size_t a = 0; a < n_agents; ++a) {
                const StepRecord& last = rr.records[rr.records.size() - n_agents + a];
                out.records.push_back({run_index, method.name(), last.agent_id, last.err_m,
                                       last.det_p});
            }
        }
        per_run[static_cast<std::size_t>(run_index)] = std::move(out);
    };

    const int workers = std::min(worker_count(), config.runs);
    if (workers <= 1) {
        for (int r = 0; r < config.runs; ++r) simulate_run(r);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (int r = next.fetch_add(1); r < config.runs; r = next.fetch_add(1)) {
                        simulate_run(r);
                    }
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    MonteCarloResult result;
    result.noise_checksums.reserve(per_run.size());
    for (PerRun& pr : per_run) {
        result.noise_checksums.push_back(pr.noise_checksum);
        result.runs.insert(result.runs.end(), pr.records.begin(), pr.records.end());
    }

    // Summaries per (method, agent), in config order.
    const std::size_t n_agents = config.base.agents.size();
    for (const MethodSpec& method : config.base.methods) {
        const std::string name = method.name();
        for (std::size_t a = 1; a <= n_agents; ++a) {
            std::vector<double> errs;
            errs.reserve(static_cast<std::size_t>(config.runs));
            for (const McRunRecord& r : result.runs) {
                if (r.method == name && r.agent_id == static_cast<int>(a)) {
                    errs.push_back(r.final_err_m);
                }
            }
            SummaryRecord s;
            s.method = name;
            s.agent_id = static_cast<int>(a);
            s.runs = static_cast<int>(errs.size());
            double sum = 0.0;
            for (double e : errs) sum += e;
            s.mean = errs.empty() ? 0.0 : sum / static_cast<double>(errs.size());
            s.p05 = percentile(errs, 5.0);
            s.p25 = percentile(errs, 25.0);
            s.median = percentile(errs, 50.0);
            s.p75 = percentile(errs, 75.0);
            s.p95 = percentile(errs, 95.0);
            result.summaries.push_back(std::move(s));
        }
    }

    // Agent-1 histograms with shared edges across methods.
    double err_max = 0.0;
    for (const McRunRecord& r : result.runs) {
        if (r.agent_id == 1) err_max = std::max(err_max, r.final_err_m);
    }
    if (err_max <= 0.0) err_max = 1.0;
    const int bins = config.histogram_bins;
    std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) {
        edges[static_cast<std::size_t>(b)] = err_max * static_cast<double>(b) / bins;
    }
    for (const MethodSpec& method : config.base.methods) {
        HistogramRecord h;
        h.method = method.name();
        h.agent_id = 1;
        h.edges = edges;
        h.counts.assign(static_cast<std::size_t>(bins), 0);
        for (const McRunRecord& r : result.runs) {
            if (r.method != h.method || r.agent_id != 1) continue;
            int b = static_cast<int>(r.final_err_m / err_max * bins);
            if (b >= bins) b = bins - 1; // value at the top edge lands in the last bin
            if (b < 0) b = 0;
            ++h.counts[static_cast<std::size_t>(b)];
        }
        result.histograms.push_back(std::move(h));
    }
    return result;
}

void write_montecarlo_csvs(const MonteCarloResult& result, const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    const auto open = [](const std::string& path) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + path);
        return out;
    };

    {
        std::ofstream out = open(out_dir + "/mc_runs.csv");
        out << "run_id,method,agent_id,final_err_m,final_det_P\n";
        for (const McRunRecord& r : result.runs) {
            out << r.run_id << ',' << r.method << ',' << r.agent_id << ','
                << format_double(r.final_err_m) << ',' << format_double(r.final_det_p) << '\n';
        }
        if (!out.good()) throw IoError("write failed: " + out_dir + "/mc_runs.csv");
    }
    {
        std::ofstream out = open(out_dir + "/mc_summary.csv");
        out << "method,agent_id,runs,mean,p05,p25,median,p75,p95\n";
        for (const SummaryRecord& s : result.summaries) {
            out << s.method << ',' << s.agent_id << ',' << s.runs << ',' << format_double(s.mean)
                << ',' << format_double(s.p05) << ',' << format_double(s.p25) << ','
                << format_double(s.median) << ',' << format_double(s.p75) << ','
                << format_double(s.p95) << '\n';
        }
        if (!out.good()) throw IoError("write failed: " + out_dir + "/mc_summary.csv");
    }
    {
        std::ofstream out = open(out_dir + "/mc_histogram.csv");
        out << "method,agent_id,bin_index,bin_lo,bin_hi,count\n";
        for (const HistogramRecord& h : result.histograms) {
            for (std::size_t b = 0; b < h.counts.size(); ++b) {
                out << h.method << ',' << h.agent_id << ',' << b << ','
                    << format_double(h.edges[b]) << ',' << format_double(h.edges[b + 1]) << ','
                    << h.counts[b] << '\n';
            }
        }
        if (!out.good()) throw IoError("write failed: " + out_dir + "/mc_histogram.csv");
    }
}

} // namespace ellipfuse
