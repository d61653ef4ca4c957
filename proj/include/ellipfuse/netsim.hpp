#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ellipfuse/agent.hpp"
#include "ellipfuse/rng.hpp"

namespace ellipfuse {

/// Broadcast schedule and delivery model. The default (period 1, no drops,
/// complete topology) has every agent exchange estimates every step.
struct NetworkConfig {
    enum class Topology { complete, explicit_edges };

    int comm_period = 1;   ///< steps between broadcast rounds
    double drop_prob = 0.0; ///< per-message loss probability, in [0, 1)
    Topology topology = Topology::complete;
    std::vector<std::pair<int, int>> edges; ///< directed (sender, receiver), 1-based ids

    bool connects(int sender_id, int receiver_id) const {
        if (topology == Topology::complete) return true;
        for (const auto& [s, r] : edges) {
            if (s == sender_id && r == receiver_id) return true;
        }
        return false;
    }
};

/// A fusion method selection for one simulation variant; `collaborative`
/// false is the baseline that ignores all communications.
struct MethodSpec {
    FusionMethod fusion = FusionMethod::cce;
    bool collaborative = true;

    std::string name() const { return collaborative ? to_string(fusion) : "noncollab"; }
};

struct AgentConfig {
    Ellipsoid initial_estimate;
    SensorParams sensor;
};

/// A full experiment description (also the JSON file schema; see config.hpp).
struct ScenarioConfig {
    Vec2 target;
    std::vector<AgentConfig> agents;
    int steps = 1;
    std::vector<MethodSpec> methods;
    AlphaCriterion alpha_criterion = AlphaCriterion::min_determinant;
    NetworkConfig network;
    std::uint64_t seed = 0;
};

/// One CSV row of the simulation log. Event counters are per step.
struct StepRecord {
    int run_id = 0;
    int step = 0;
    int agent_id = 0;
    std::string method;
    double err_m = 0.0;
    double det_p = 0.0;
    double est_x = 0.0;
    double est_y = 0.0;
    double p_xx = 0.0;
    double p_xy = 0.0;
    double p_yy = 0.0;
    int n_meas = 0;
    int n_comm_accepted = 0;
    int n_comm_discarded = 0;
};

struct RunResult {
    std::vector<StepRecord> records;
    std::uint64_t noise_checksum = 0; ///< folded over the agents' measurement streams
    std::uint64_t drop_checksum = 0;
};

/// Deterministic discrete-step world: a stationary target, one estimator per
/// agent, and same-step broadcast delivery.
///
/// Within a step the order is fixed: (1) every agent with the target in range
/// draws one noisy bearing and fuses it; (2) on broadcast steps (pre-step
/// clock divisible by comm_period, so the first step always broadcasts) all
/// estimates are snapshotted, then delivered in ascending (receiver id,
/// sender id) order, with one drop draw consumed per connected directed edge;
/// (3) a StepRecord is emitted per agent. Self-messages are never delivered.
class World {
public:
    World(const ScenarioConfig& config, const MethodSpec& method, std::uint64_t seed,
          int run_id = 0);

    /// Rows describing the initial estimates (step 0).
    std::vector<StepRecord> init_records() const;

    /// Advance one step and return the per-agent records for it.
    std::vector<StepRecord> step();

    int clock() const { return clock_; }
    const std::vector<AgentEstimator>& agents() const { return agents_; }
    const Vec2& target() const { return target_; }

    std::uint64_t noise_checksum() const;
    std::uint64_t drop_checksum() const { return drop_stream_.checksum(); }

private:
    StepRecord record_for(std::size_t idx, int step_no, int n_meas, int n_acc, int n_dis) const;

    Vec2 target_;
    NetworkConfig network_;
    std::string method_name_;
    int run_id_;
    int clock_ = 0;
    std::vector<AgentEstimator> agents_;
    std::vector<Rng> meas_streams_;
    Rng drop_stream_;
    std::vector<std::pair<int, Ellipsoid>> pending_; ///< cleared after each delivery round
};

/// Build a world from `config` with the given method variant and run it for
/// config.steps steps. Identical (config, method, seed) always produces an
/// identical log.
RunResult run_scenario(const ScenarioConfig& config, const MethodSpec& method,
                       std::uint64_t seed, int run_id = 0);

} // namespace ellipfuse
