#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ellipfuse/netsim.hpp"

namespace ellipfuse {

/// Randomization used per Monte Carlo run. Initial estimates are drawn
/// around the true target: gamma ~ N(gamma_mean, gamma_std^2) per agent
/// (resampled until positive), offset e ~ N(0, gamma^2 I), initial shape
/// gamma^2 I; the sensor band and noise are drawn from the normal
/// distributions below, rejection-resampled until the SensorParams
/// invariants hold.
struct McRandomization {
    double gamma_mean = 10.0;
    double gamma_std = 10.0;
    double r_min_mean = 2.0;
    double r_min_std = 5.0;
    double r_max_mean = 80.0;
    double r_max_std = 20.0;
    double sigma_deg_mean = 5.0;
    double sigma_deg_std = 5.0;
};

struct MonteCarloConfig {
    ScenarioConfig base;
    int runs = 1;
    McRandomization randomization;
    int histogram_bins = 30;
};

/// Final-error record for one (run, method, agent).
struct McRunRecord {
    int run_id = 0;
    std::string method;
    int agent_id = 0;
    double final_err_m = 0.0;
    double final_det_p = 0.0;
};

/// Final-error statistics for one (method, agent).
struct SummaryRecord {
    std::string method;
    int agent_id = 0;
    int runs = 0;
    double mean = 0.0;
    double p05 = 0.0;
    double p25 = 0.0;
    double median = 0.0;
    double p75 = 0.0;
    double p95 = 0.0;
};

/// Histogram of agent-1 final errors for one method; all methods share the
/// same bin edges so the counts are directly comparable.
struct HistogramRecord {
    std::string method;
    int agent_id = 1;
    std::vector<double> edges; ///< histogram_bins + 1 ascending edges
    std::vector<int> counts;   ///< histogram_bins entries; sums to runs
};

} // namespace ellipfuse
