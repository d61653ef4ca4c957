#include "ellipfuse/config.hpp"

#include <fstream>
#include <set>

namespace ellipfuse {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path.empty() ? "/" : path, msg);
}

const json& require_object(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    return j;
}

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (known.count(key) == 0) fail(path + "/" + key, "unknown field");
    }
}

const json& require_field(const json& j, const std::string& path, const std::string& key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path + "/" + key, "missing required field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

std::uint64_t u64_at(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !j.is_number_integer()) fail(path, "expected an integer");
    if (j.is_number_integer() && j.get<std::int64_t>() < 0) fail(path, "must be non-negative");
    return j.get<std::uint64_t>();
}

Vec2 vec2_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        fail(path, "expected an array of two numbers");
    }
    const Vec2 v{j[0].get<double>(), j[1].get<double>()};
    if (!v.finite()) fail(path, "components must be finite");
    return v;
}

SpdMatrix2 shape_at(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() ||
        j[0].size() != 2 || j[1].size() != 2) {
        fail(path, "expected a 2x2 matrix [[a,b],[b,c]]");
    }
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            if (!j[r][c].is_number()) fail(path, "matrix entries must be numbers");
        }
    }
    try {
        return SpdMatrix2::from_rows(j[0][0].get<double>(), j[0][1].get<double>(),
                                     j[1][0].get<double>(), j[1][1].get<double>());
    } catch (const InvalidMatrixError& e) {
        fail(path, e.what());
    }
}

FusionMethod method_from_name(const std::string& name, const std::string& path) {
    if (name == "kalman") return FusionMethod::kalman;
    if (name == "ci") return FusionMethod::ci;
    if (name == "ici") return FusionMethod::ici;
    if (name == "cce") return FusionMethod::cce;
    fail(path, "unknown method '" + name + "' (expected kalman|ci|ici|cce|noncollab)");
}

NetworkConfig network_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"comm_period", "drop_prob", "topology", "edges"});
    NetworkConfig net;
    if (j.contains("comm_period")) {
        net.comm_period = int_at(j["comm_period"], path + "/comm_period");
        if (net.comm_period < 1) fail(path + "/comm_period", "must be >= 1");
    }
    if (j.contains("drop_prob")) {
        net.drop_prob = number_at(j["drop_prob"], path + "/drop_prob");
        if (!(net.drop_prob >= 0.0 && net.drop_prob < 1.0)) {
            fail(path + "/drop_prob", "must lie in [0, 1)");
        }
    }
    if (j.contains("topology")) {
        const json& t = j["topology"];
        if (!t.is_string()) fail(path + "/topology", "expected 'complete' or 'explicit'");
        const std::string s = t.get<std::string>();
        if (s == "complete") {
            net.topology = NetworkConfig::Topology::complete;
        } else if (s == "explicit") {
            net.topology = NetworkConfig::Topology::explicit_edges;
        } else {
            fail(path + "/topology", "expected 'complete' or 'explicit'");
        }
    }
    if (net.topology == NetworkConfig::Topology::explicit_edges) {
        if (!j.contains("edges")) fail(path + "/edges", "required for explicit topology");
        const json& edges = j["edges"];
        if (!edges.is_array()) fail(path + "/edges", "expected an array of [sender, receiver]");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string epath = path + "/edges/" + std::to_string(i);
            const json& e = edges[i];
            if (!e.is_array() || e.size() != 2) fail(epath, "expected [sender, receiver]");
            const int s = int_at(e[0], epath);
            const int r = int_at(e[1], epath);
            if (s == r) fail(epath, "self-edges are not allowed");
            net.edges.emplace_back(s, r);
        }
    } else if (j.contains("edges")) {
        fail(path + "/edges", "only valid with explicit topology");
    }
    return net;
}

McRandomization randomization_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"gamma_mean", "gamma_std", "r_min_mean", "r_min_std", "r_max_mean",
                    "r_max_std", "sigma_deg_mean", "sigma_deg_std"});
    McRandomization r;
    const auto read = [&](const char* key, double& target) {
        if (j.contains(key)) {
            target = number_at(j[key], path + "/" + key);
            if (!std::isfinite(target)) fail(path + "/" + key, "must be finite");
        }
    };
    read("gamma_mean", r.gamma_mean);
    read("gamma_std", r.gamma_std);
    read("r_min_mean", r.r_min_mean);
    read("r_min_std", r.r_min_std);
    read("r_max_mean", r.r_max_mean);
    read("r_max_std", r.r_max_std);
    read("sigma_deg_mean", r.sigma_deg_mean);
    read("sigma_deg_std", r.sigma_deg_std);
    for (double s : {r.gamma_std, r.r_min_std, r.r_max_std, r.sigma_deg_std}) {
        if (!(s > 0.0)) fail(path, "distribution scales must be positive");
    }
    return r;
}

} // namespace

nlohmann::json to_json(const Ellipsoid& e) {
    return json{{"center", {e.center.x, e.center.y}},
                {"shape",
                 {{e.shape.xx(), e.shape.xy()}, {e.shape.xy(), e.shape.yy()}}}};
}

nlohmann::json to_json(const SensorParams& s) {
    return json{{"pose", {s.pose.x, s.pose.y}},
                {"r_min", s.r_min},
                {"r_max", s.r_max},
                {"sigma_deg", s.sigma_deg()}};
}

Ellipsoid ellipsoid_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"center", "shape"});
    const Vec2 center = vec2_at(require_field(j, path, "center"), path + "/center");
    const SpdMatrix2 shape = shape_at(require_field(j, path, "shape"), path + "/shape");
    return Ellipsoid(center, shape);
}

SensorParams sensor_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"pose", "r_min", "r_max", "sigma_deg"});
    const Vec2 pose = vec2_at(require_field(j, path, "pose"), path + "/pose");
    const double r_min = number_at(require_field(j, path, "r_min"), path + "/r_min");
    const double r_max = number_at(require_field(j, path, "r_max"), path + "/r_max");
    const double sigma_deg = number_at(require_field(j, path, "sigma_deg"), path + "/sigma_deg");
    try {
        return SensorParams::from_degrees(pose, r_min, r_max, sigma_deg);
    } catch (const ParameterError& e) {
        fail(path, e.what());
    }
}

ScenarioConfig scenario_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path,
                   {"target", "agents", "steps", "methods", "alpha_criterion", "network", "seed"});

    ScenarioConfig c;
    c.target = vec2_at(require_field(j, path, "target"), path + "/target");

    const json& agents = require_field(j, path, "agents");
    if (!agents.is_array() || agents.empty()) {
        fail(path + "/agents", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const std::string apath = path + "/agents/" + std::to_string(i);
        const json& a = agents[i];
        require_object(a, apath);
        reject_unknown(a, apath, {"initial_estimate", "sensor"});
        c.agents.push_back(
            {ellipsoid_from_json(require_field(a, apath, "initial_estimate"),
                                 apath + "/initial_estimate"),
             sensor_from_json(require_field(a, apath, "sensor"), apath + "/sensor")});
    }

    c.steps = int_at(require_field(j, path, "steps"), path + "/steps");
    if (c.steps < 1) fail(path + "/steps", "must be >= 1");

    const json& methods = require_field(j, path, "methods");
    if (!methods.is_array() || methods.empty()) {
        fail(path + "/methods", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < methods.size(); ++i) {
        const std::string mpath = path + "/methods/" + std::to_string(i);
        if (!methods[i].is_string()) fail(mpath, "expected a method name string");
        const std::string name = methods[i].get<std::string>();
        MethodSpec spec;
        if (name == "noncollab") {
            spec.collaborative = false;
            spec.fusion = FusionMethod::kalman; // never used without communications
        } else {
            spec.fusion = method_from_name(name, mpath);
        }
        for (const MethodSpec& prev : c.methods) {
            if (prev.name() == spec.name()) fail(mpath, "duplicate method '" + name + "'");
        }
        c.methods.push_back(spec);
    }

    if (j.contains("alpha_criterion")) {
        const json& crit = j["alpha_criterion"];
        if (!crit.is_string()) fail(path + "/alpha_criterion", "expected 'det' or 'trace'");
        const std::string s = crit.get<std::string>();
        if (s == "det") {
            c.alpha_criterion = AlphaCriterion::min_determinant;
        } else if (s == "trace") {
            c.alpha_criterion = AlphaCriterion::min_trace;
        } else {
            fail(path + "/alpha_criterion", "expected 'det' or 'trace'");
        }
    }

    if (j.contains("network")) {
        c.network = network_from_json(j["network"], path + "/network");
        const int n = static_cast<int>(c.agents.size());
        for (std::size_t i = 0; i < c.network.edges.size(); ++i) {
            const auto& [s, r] = c.network.edges[i];
            if (s < 1 || s > n || r < 1 || r > n) {
                fail(path + "/network/edges/" + std::to_string(i),
                     "agent ids must lie in [1, " + std::to_string(n) + "]");
            }
        }
    }

    c.seed = u64_at(require_field(j, path, "seed"), path + "/seed");
    return c;
}

MonteCarloConfig montecarlo_from_json(const json& j) {
    require_object(j, "");
    reject_unknown(j, "", {"base", "runs", "randomization", "histogram_bins"});
    MonteCarloConfig c;
    c.base = scenario_from_json(require_field(j, "", "base"), "/base");
    c.runs = int_at(require_field(j, "", "runs"), "/runs");
    if (c.runs < 1) fail("/runs", "must be >= 1");
    if (j.contains("randomization")) {
        c.randomization = randomization_from_json(j["randomization"], "/randomization");
    }
    if (j.contains("histogram_bins")) {
        c.histogram_bins = int_at(j["histogram_bins"], "/histogram_bins");
        if (c.histogram_bins < 1) fail("/histogram_bins", "must be >= 1");
    }
    return c;
}

nlohmann::json to_json(const ScenarioConfig& c) {
    json agents = json::array();
    for (const AgentConfig& a : c.agents) {
        agents.push_back(
            {{"initial_estimate", to_json(a.initial_estimate)}, {"sensor", to_json(a.sensor)}});
    }
    json methods = json::array();
    for (const MethodSpec& m : c.methods) methods.push_back(m.name());

    json network{{"comm_period", c.network.comm_period}, {"drop_prob", c.network.drop_prob}};
    if (c.network.topology == NetworkConfig::Topology::explicit_edges) {
        network["topology"] = "explicit";
        json edges = json::array();
        for (const auto& [s, r] : c.network.edges) edges.push_back({s, r});
        network["edges"] = edges;
    } else {
        network["topology"] = "complete";
    }

    return json{{"target", {c.target.x, c.target.y}},
                {"agents", agents},
                {"steps", c.steps},
                {"methods", methods},
                {"alpha_criterion", to_string(c.alpha_criterion)},
                {"network", network},
                {"seed", c.seed}};
}

nlohmann::json to_json(const MonteCarloConfig& c) {
    return json{{"base", to_json(c.base)},
                {"runs", c.runs},
                {"randomization",
                 {{"gamma_mean", c.randomization.gamma_mean},
                  {"gamma_std", c.randomization.gamma_std},
                  {"r_min_mean", c.randomization.r_min_mean},
                  {"r_min_std", c.randomization.r_min_std},
                  {"r_max_mean", c.randomization.r_max_mean},
                  {"r_max_std", c.randomization.r_max_std},
                  {"sigma_deg_mean", c.randomization.sigma_deg_mean},
                  {"sigma_deg_std", c.randomization.sigma_deg_std}}},
                {"histogram_bins", c.histogram_bins}};
}

namespace {

json parse_file(const std::string& file_path) {
    std::ifstream in(file_path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + file_path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("/", std::string("JSON parse error: ") + e.what());
    }
}

} // namespace

AnyConfig load_config(const std::string& file_path) {
    const json j = parse_file(file_path);
    if (j.is_object() && j.contains("runs")) {
        return montecarlo_from_json(j);
    }
    return scenario_from_json(j, "");
}

std::pair<Ellipsoid, Ellipsoid> load_ellipsoid_pair(const std::string& file_path) {
    const json j = parse_file(file_path);
    require_object(j, "");
    reject_unknown(j, "", {"ei", "ej"});
    return {ellipsoid_from_json(require_field(j, "", "ei"), "/ei"),
            ellipsoid_from_json(require_field(j, "", "ej"), "/ej")};
}

} // namespace ellipfuse
