#include "asuman/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace asuman {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("scenario: " + where + ": " + what);
}

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(where, "unknown key \"" + it.key() + "\"");
    }
}

double get_number(const json& obj, const char* where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where, std::string(key) + " must be a number");
    return v.get<double>();
}

int get_int(const json& obj, const char* where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where, std::string(key) + " must be an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const char* where, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where, std::string(key) + " must be a string");
    return v.get<std::string>();
}

bool get_bool(const json& obj, const char* where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where, std::string(key) + " must be a boolean");
    return v.get<bool>();
}

void parse_topology(const json& obj, ScenarioDesc& d) {
    check_keys(obj, "topology", {"kind", "n", "q", "rows", "cols", "wrap", "c", "m", "head_links"});
    const std::string kind = get_string(obj, "topology", "kind", "");
    if (kind == "complete") {
        d.kind = TopologyKind::Complete;
        d.n = get_int(obj, "topology", "n", 0);
        if (d.n < 1) fail("topology", "complete requires n >= 1");
    } else if (kind == "partial") {
        d.kind = TopologyKind::Partial;
        d.n = get_int(obj, "topology", "n", 0);
        d.q = get_number(obj, "topology", "q", 0.0);
        if (d.n < 2) fail("topology", "partial requires n >= 2");
        if (!(d.q > 0.0 && d.q <= 1.0)) fail("topology", "partial requires q in (0, 1]");
    } else if (kind == "ring") {
        d.kind = TopologyKind::Ring;
        d.n = get_int(obj, "topology", "n", 0);
        if (d.n < 3) fail("topology", "ring requires n >= 3");
    } else if (kind == "grid") {
        d.kind = TopologyKind::Grid;
        d.rows = get_int(obj, "topology", "rows", 0);
        d.cols = get_int(obj, "topology", "cols", 0);
        d.wrap = get_bool(obj, "topology", "wrap", true);
        if (d.rows < 2 || d.cols < 2) fail("topology", "grid requires rows, cols >= 2");
    } else if (kind == "clustered") {
        d.kind = TopologyKind::Clustered;
        if (obj.contains("n")) {
            if (obj.contains("c") || obj.contains("m"))
                fail("topology", "give either n or (c, m), not both");
            d.n = get_int(obj, "topology", "n", 0);
            if (d.n < 4) fail("topology", "clustered requires n >= 4");
            d.c = static_cast<int>(std::llround(std::sqrt(static_cast<double>(d.n))));
            if (d.c < 1 || d.n % d.c != 0)
                fail("topology", "n must split into round(sqrt(n)) equal clusters; give c and m explicitly");
            d.m = d.n / d.c;
        } else {
            d.c = get_int(obj, "topology", "c", 0);
            d.m = get_int(obj, "topology", "m", 0);
            if (d.c < 1 || d.m < 2) fail("topology", "clustered requires c >= 1 and m >= 2");
        }
        const std::string links = get_string(obj, "topology", "head_links", "complete");
        if (links == "none")
            d.head_links = HeadLinks::None;
        else if (links == "ring")
            d.head_links = HeadLinks::Ring;
        else if (links == "complete")
            d.head_links = HeadLinks::Complete;
        else
            fail("topology", "head_links must be none, ring, or complete");
    } else {
        fail("topology", "kind must be complete, partial, ring, grid, or clustered");
    }
}

void parse_rates(const json& obj, ScenarioDesc& d) {
    check_keys(obj, "rates", {"lambda_e", "lambda", "B"});
    d.lambda_e = get_number(obj, "rates", "lambda_e", 1.0);
    d.lambda = get_number(obj, "rates", "lambda", 1.0);
    d.B = get_number(obj, "rates", "B", -1.0);
    if (!(d.lambda > 0.0)) fail("rates", "lambda must be positive");
    if (d.lambda_e < 0.0) fail("rates", "lambda_e must be nonnegative");
    if (obj.contains("B") && !(d.B > 0.0)) fail("rates", "B must be positive");
}

void parse_profile(const json& obj, ScenarioDesc& d) {
    check_keys(obj, "profile", {"kind", "nu"});
    const std::string kind = get_string(obj, "profile", "kind", "uniform");
    if (kind == "uniform") {
        d.power_law = false;
        if (obj.contains("nu")) fail("profile", "nu only applies to power_law");
    } else if (kind == "power_law") {
        d.power_law = true;
        d.nu = get_number(obj, "profile", "nu", 0.0);
        if (!(d.nu > 0.0 && d.nu < 1.0)) fail("profile", "power_law requires nu in (0, 1)");
    } else {
        fail("profile", "kind must be uniform or power_law");
    }
}

void parse_policy(const json& obj, ScenarioDesc& d) {
    check_keys(obj, "policy", {"kind", "C", "p", "frozen"});
    const std::string kind = get_string(obj, "policy", "kind", "");
    const bool frozen = get_bool(obj, "policy", "frozen", false);
    if (kind == "uniform") {
        d.policy = PolicyType::UniformGossip;
        if (frozen) fail("policy", "frozen only applies to asuman");
        if (obj.contains("C")) fail("policy", "C only applies to asuman and hierarchical");
    } else if (kind == "asuman") {
        d.policy = frozen ? PolicyType::AsumanFrozen : PolicyType::Asuman;
    } else if (kind == "hierarchical") {
        d.policy = PolicyType::Hierarchical;
        if (frozen) fail("policy", "frozen only applies to asuman");
    } else if (kind.empty()) {
        fail("policy", "kind is required when a policy block is given");
    } else {
        fail("policy", "kind must be uniform, asuman, or hierarchical");
    }
    d.policy_given = true;
    if (obj.contains("C")) {
        d.C = get_number(obj, "policy", "C", -1.0);
        if (d.C < 0.0) fail("policy", "C must be nonnegative");
    }
    if (obj.contains("p")) {
        if (d.policy != PolicyType::Hierarchical) fail("policy", "p only applies to hierarchical");
        d.p = get_number(obj, "policy", "p", -1.0);
        if (!(d.p >= 0.0 && d.p <= 1.0)) fail("policy", "p must lie in [0, 1]");
    }
}

void parse_run(const json& obj, ScenarioDesc& d) {
    check_keys(obj, "run", {"epochs", "warmup_epochs", "replications", "seed"});
    if (!obj.contains("epochs")) fail("run", "epochs is required");
    const json& e = obj.at("epochs");
    if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
        fail("run", "epochs must be a positive integer");
    d.run.epochs = e.get<std::int64_t>();
    if (obj.contains("warmup_epochs")) {
        const json& w = obj.at("warmup_epochs");
        if (!w.is_number_integer() || w.get<std::int64_t>() < 0)
            fail("run", "warmup_epochs must be a nonnegative integer");
        d.run.warmup_epochs = w.get<std::int64_t>();
        if (d.run.warmup_epochs >= d.run.epochs) fail("run", "warmup_epochs must be below epochs");
    }
    d.run.replications = get_int(obj, "run", "replications", 1);
    if (d.run.replications < 1) fail("run", "replications must be >= 1");
    if (obj.contains("seed")) {
        const json& s = obj.at("seed");
        if (!s.is_number_unsigned() && !s.is_number_integer())
            fail("run", "seed must be an integer");
        if (s.is_number_integer() && s.get<std::int64_t>() < 0) fail("run", "seed must be nonnegative");
        d.run.seed = s.get<std::uint64_t>();
    }
}

} // namespace

ScenarioDesc parse_scenario_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("scenario: top level must be an object");
    check_keys(root, "scenario", {"topology", "rates", "profile", "policy", "run"});
    if (!root.contains("topology")) throw std::invalid_argument("scenario: topology block is required");
    if (!root.contains("run")) throw std::invalid_argument("scenario: run block is required");

    ScenarioDesc d;
    parse_topology(root.at("topology"), d);
    if (root.contains("rates")) parse_rates(root.at("rates"), d);
    if (root.contains("profile")) parse_profile(root.at("profile"), d);
    if (root.contains("policy")) parse_policy(root.at("policy"), d);
    parse_run(root.at("run"), d);
    return d;
}

ScenarioDesc load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading scenario file: " + path);
    return parse_scenario_text(buf.str());
}

Scenario build_scenario(const ScenarioDesc& desc) {
    Scenario s;
    switch (desc.kind) {
        case TopologyKind::Complete:
            s.spec.topology = build_complete(desc.n);
            break;
        case TopologyKind::Partial:
            s.spec.topology = build_partial(desc.n, desc.q);
            break;
        case TopologyKind::Ring:
            s.spec.topology = build_ring(desc.n);
            break;
        case TopologyKind::Grid:
            s.spec.topology = build_grid(desc.rows, desc.cols, desc.wrap);
            break;
        case TopologyKind::Clustered:
            s.spec.topology = build_clustered(desc.c, desc.m, desc.head_links);
            break;
    }
    const int n = s.spec.topology.n;

    s.spec.rates.lambda_e = desc.lambda_e;
    s.spec.rates.lambda_total = desc.lambda;
    s.spec.rates.gossip_capacity = desc.B < 0.0 ? static_cast<double>(n) * desc.lambda : desc.B;

    PolicyType type = desc.policy;
    if (!desc.policy_given && desc.kind == TopologyKind::Clustered) type = PolicyType::Hierarchical;
    const double c_coeff = desc.C < 0.0 ? 1.0 / static_cast<double>(n) : desc.C;

    switch (type) {
        case PolicyType::UniformGossip:
            s.spec.policy = PolicyKind::uniform();
            break;
        case PolicyType::Asuman:
            s.spec.policy = PolicyKind::asuman(c_coeff);
            break;
        case PolicyType::AsumanFrozen:
            s.spec.policy = PolicyKind::asuman_frozen(c_coeff);
            break;
        case PolicyType::Hierarchical: {
            HeadPolicy head = HeadPolicy::FullAsuman;
            if (desc.head_links == HeadLinks::None) head = HeadPolicy::Disconnected;
            if (desc.head_links == HeadLinks::Ring) head = HeadPolicy::Ring;
            double p = desc.p;
            if (p < 0.0) p = head == HeadPolicy::Disconnected ? 1.0 : 0.5;
            s.spec.policy = PolicyKind::hierarchical(p, head, c_coeff);
            break;
        }
    }

    if (desc.kind == TopologyKind::Clustered) {
        if (desc.power_law)
            throw std::invalid_argument("scenario: power_law profile is not defined for clustered topologies");
        s.spec.profile = rate_profile_cluster_heads(desc.lambda, s.spec.topology);
    } else if (desc.power_law) {
        s.spec.profile = rate_profile_power_law(desc.lambda, desc.nu, n);
    } else {
        s.spec.profile = rate_profile_uniform(desc.lambda, n);
    }

    auto violations = validate_spec(s.spec);
    if (!violations.empty()) {
        std::string msg = "scenario: invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        throw std::invalid_argument(msg);
    }

    s.run = desc.run;
    if (s.run.warmup_epochs < 0) s.run.warmup_epochs = s.run.epochs / 5;
    return s;
}

void apply_sweep_value(ScenarioDesc& desc, const std::string& param, double value) {
    auto as_count = [&](const char* what) {
        const double r = std::round(value);
        if (std::fabs(value - r) > 1e-9 || r < 1.0)
            throw std::invalid_argument(std::string("sweep: ") + what + " values must be positive integers");
        return static_cast<int>(r);
    };
    if (param == "n") {
        const int n = as_count("n");
        switch (desc.kind) {
            case TopologyKind::Complete:
            case TopologyKind::Partial:
            case TopologyKind::Ring:
                desc.n = n;
                break;
            case TopologyKind::Clustered: {
                const int c = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
                if (c < 1 || n % c != 0)
                    throw std::invalid_argument("sweep: clustered n must split into round(sqrt(n)) equal clusters");
                desc.c = c;
                desc.m = n / c;
                break;
            }
            case TopologyKind::Grid:
                throw std::invalid_argument("sweep: n sweeps are not supported on grids; sweep rows/cols via separate scenarios");
        }
    } else if (param == "q") {
        if (desc.kind != TopologyKind::Partial)
            throw std::invalid_argument("sweep: q only applies to partial topologies");
        if (!(value > 0.0 && value <= 1.0))
            throw std::invalid_argument("sweep: q values must lie in (0, 1]");
        desc.q = value;
    } else if (param == "nu") {
        if (!desc.power_law)
            throw std::invalid_argument("sweep: nu only applies to power_law profiles");
        if (!(value > 0.0 && value < 1.0))
            throw std::invalid_argument("sweep: nu values must lie in (0, 1)");
        desc.nu = value;
    } else if (param == "p") {
        if (desc.policy != PolicyType::Hierarchical && desc.policy_given)
            throw std::invalid_argument("sweep: p only applies to hierarchical policies");
        if (desc.kind != TopologyKind::Clustered)
            throw std::invalid_argument("sweep: p only applies to clustered topologies");
        if (!(value >= 0.0 && value <= 1.0))
            throw std::invalid_argument("sweep: p values must lie in [0, 1]");
        desc.p = value;
    } else if (param == "c") {
        if (desc.kind != TopologyKind::Clustered)
            throw std::invalid_argument("sweep: c only applies to clustered topologies");
        desc.c = as_count("c");
    } else {
        throw std::invalid_argument("sweep: unknown parameter \"" + param + "\" (use n, q, nu, p, or c)");
    }
}

SimConfig make_sim_config(const Scenario& scenario, std::int32_t replication, std::uint64_t seed) {
    SimConfig cfg;
    cfg.spec = scenario.spec;
    cfg.horizon_epochs = scenario.run.epochs;
    cfg.warmup_epochs = scenario.run.warmup_epochs;
    cfg.seed = seed;
    cfg.replication = replication;
    return cfg;
}

} // namespace asuman
