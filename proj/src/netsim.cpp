#include "ellipfuse/netsim.hpp"

namespace ellipfuse {

World::World(const ScenarioConfig& config, const MethodSpec& method, std::uint64_t seed,
             int run_id)
    : target_(config.target), network_(config.network), method_name_(method.name()),
      run_id_(run_id), drop_stream_(Rng::stream(seed, StreamPurpose::message_drops, 0)) {
    if (config.agents.empty()) {
        throw ParameterError("World: at least one agent is required");
    }
    if (network_.comm_period < 1) {
        throw ParameterError("World: comm_period must be >= 1");
    }
    if (!(network_.drop_prob >= 0.0 && network_.drop_prob < 1.0)) {
        throw ParameterError("World: drop_prob must lie in [0, 1)");
    }
    agents_.reserve(config.agents.size());
    meas_streams_.reserve(config.agents.size());
    for (std::size_t i = 0; i < config.agents.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        agents_.emplace_back(id, config.agents[i].initial_estimate, config.agents[i].sensor,
                             method.fusion, config.alpha_criterion, method.collaborative);
        meas_streams_.push_back(Rng::stream(seed, StreamPurpose::measurement_noise,
                                            static_cast<std::uint64_t>(id)));
    }
}

StepRecord World::record_for(std::size_t idx, int step_no, int n_meas, int n_acc,
                             int n_dis) const {
    const AgentEstimator& ag = agents_[idx];
    const Ellipsoid& e = ag.estimate();
    StepRecord r;
    r.run_id = run_id_;
    r.step = step_no;
    r.agent_id = ag.id();
    r.method = method_name_;
    r.err_m = (e.center - target_).norm();
    r.det_p = e.shape.determinant();
    r.est_x = e.center.x;
    r.est_y = e.center.y;
    r.p_xx = e.shape.xx();
    r.p_xy = e.shape.xy();
    r.p_yy = e.shape.yy();
    r.n_meas = n_meas;
    r.n_comm_accepted = n_acc;
    r.n_comm_discarded = n_dis;
    return r;
}

std::vector<StepRecord> World::init_records() const {
    std::vector<StepRecord> out;
    out.reserve(agents_.size());
    for (std::size_t i = 0; i < agents_.size(); ++i) {
        out.push_back(record_for(i, 0, 0, 0, 0));
    }
    return out;
}

std::vector<StepRecord> World::step() {
    const std::size_t n = agents_.size();
    std::vector<int> n_meas(n, 0), n_acc(n, 0), n_dis(n, 0);

    // Phase 1: local measurements.
    for (std::size_t i = 0; i < n; ++i) {
        AgentEstimator& ag = agents_[i];
        if (in_range(target_, ag.sensor())) {
            const double z = meas_streams_[i].normal();
            ag.handle_measurement(sample_measurement(target_, ag.sensor(), z));
            n_meas[i] = 1;
        }
    }

    // Phase 2: broadcast and same-step delivery.
    if (clock_ % network_.comm_period == 0) {
        pending_.clear();
        for (const AgentEstimator& ag : agents_) {
            pending_.emplace_back(ag.id(), ag.broadcast());
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (const auto& [sender_id, msg] : pending_) {
                const int receiver_id = agents_[r].id();
                if (sender_id == receiver_id) continue;
                if (!network_.connects(sender_id, receiver_id)) continue;
                // One drop draw per connected edge, consumed regardless of
                // outcome so every method variant sees the same streams.
                const bool dropped = drop_stream_.uniform01() < network_.drop_prob;
                if (dropped) continue;
                if (!agents_[r].collaborative()) continue;
                if (agents_[r].handle_communication(msg)) {
                    ++n_acc[r];
                } else {
                    ++n_dis[r];
                }
            }
        }
        pending_.clear();
    }

    ++clock_;

    std::vector<StepRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(record_for(i, clock_, n_meas[i], n_acc[i], n_dis[i]));
    }
    return out;
}

std::uint64_t World::noise_checksum() const {
    std::uint64_t cs = 0xCBF29CE484222325ULL;
    for (const Rng& s : meas_streams_) {
        cs = (cs ^ s.checksum()) * 0x100000001B3ULL;
    }
    return cs;
}

RunResult run_scenario(const ScenarioConfig& config, const MethodSpec& method,
                       std::uint64_t seed, int run_id) {
    if (config.steps < 0) {
        throw ParameterError("run_scenario: steps must be non-negative");
    }
    World world(config, method, seed, run_id);
    RunResult result;
    result.records = world.init_records();
    result.records.reserve(static_cast<std::size_t>(config.steps + 1) * config.agents.size());
    for (int t = 0; t < config.steps; ++t) {
        auto rows = world.step();
        result.records.insert(result.records.end(), rows.begin(), rows.end());
    }
    result.noise_checksum = world.noise_checksum();
    result.drop_checksum = world.drop_checksum();
    return result;
}

} // namespace ellipfuse
