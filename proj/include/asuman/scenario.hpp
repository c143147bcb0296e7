#pragma once

#include <stdexcept>
#include <string>

#include "asuman/engine.hpp"

namespace asuman {

// thrown for filesystem failures so the CLI can map them to a distinct exit code
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunParams {
    std::int64_t epochs = 0;
    std::int64_t warmup_epochs = -1;  // -1: 20% of epochs
    int replications = 1;
    std::uint64_t seed = 1;
};

// Scenario file contents before defaults are resolved; kept separate from the
// built NetworkSpec so sweeps can rewrite one parameter and rebuild cleanly.
struct ScenarioDesc {
    TopologyKind kind = TopologyKind::Complete;
    int n = 0;
    int rows = 0, cols = 0;
    bool wrap = true;
    double q = 1.0;
    int c = 0, m = 0;
    HeadLinks head_links = HeadLinks::Complete;

    double lambda_e = 1.0;
    double lambda = 1.0;
    double B = -1.0;  // -1: n * lambda

    bool power_law = false;
    double nu = 0.5;

    PolicyType policy = PolicyType::Asuman;
    bool policy_given = false;
    double C = -1.0;  // -1: 1/n
    double p = -1.0;  // -1: 0.5, or 1 when heads are disconnected

    RunParams run;
};

struct Scenario {
    NetworkSpec spec;
    RunParams run;
};

// Strict JSON parse; unknown keys or malformed values raise std::invalid_argument.
ScenarioDesc parse_scenario_text(const std::string& text);
ScenarioDesc load_scenario(const std::string& path);  // IoError when unreadable

// Resolves defaults, builds topology/profile/policy and validates the result.
Scenario build_scenario(const ScenarioDesc& desc);

// Rewrites one swept parameter (n, q, nu, p, c); throws on unsupported combos.
void apply_sweep_value(ScenarioDesc& desc, const std::string& param, double value);

SimConfig make_sim_config(const Scenario& scenario, std::int32_t replication, std::uint64_t seed);

} // namespace asuman
