#pragma once

#include "ellipfuse/montecarlo_types.hpp"

namespace ellipfuse {

struct MonteCarloResult {
    std::vector<McRunRecord> runs;          ///< ordered by (run_id, method order, agent)
    std::vector<SummaryRecord> summaries;   ///< per (method, agent)
    std::vector<HistogramRecord> histograms; ///< per method, agent 1
    std::vector<std::uint64_t> noise_checksums; ///< per run; identical across methods
};

/// Draws the randomized scenario variant for one Monte Carlo run. Exposed so
/// tests can pin down the per-run determinism independently of the pool.
ScenarioConfig randomize_scenario(const MonteCarloConfig& config, int run_index);

/// Runs the full experiment: every run is simulated once per configured
/// method from identical initial conditions and measurement noise streams.
/// Worker count comes from ELLIPFUSE_THREADS (default: hardware concurrency);
/// results are merged by run index, so the output is independent of the
/// thread count.
MonteCarloResult run_montecarlo(const MonteCarloConfig& config);

/// Writes mc_runs.csv, mc_summary.csv and mc_histogram.csv into `out_dir`.
void write_montecarlo_csvs(const MonteCarloResult& result, const std::string& out_dir);

/// Statistics helpers (linear-interpolation percentile on a sorted copy).
double percentile(std::vector<double> values, double p);

/// Worker cap for Monte Carlo fan-out, from ELLIPFUSE_THREADS.
int worker_count();

} // namespace ellipfuse
