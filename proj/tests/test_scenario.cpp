#include <doctest.h>

#include <string>

#include "asuman/scenario.hpp"

using namespace asuman;

namespace {

// parse + build in one go for the happy paths
Scenario make(const std::string& text) { return build_scenario(parse_scenario_text(text)); }

bool throws_mentioning(const std::string& text, const std::string& needle) {
    try {
        build_scenario(parse_scenario_text(text));
    } catch (const std::invalid_argument& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

} // namespace

TEST_CASE("minimal scenario gets all the defaults") {
    Scenario s = make(R"({"topology": {"kind": "complete", "n": 16}, "run": {"epochs": 100}})");
    CHECK(s.spec.topology.kind == TopologyKind::Complete);
    CHECK(s.spec.topology.n == 16);
    CHECK(s.spec.rates.lambda_e == 1.0);
    CHECK(s.spec.rates.lambda_total == 1.0);
    CHECK(s.spec.rates.gossip_capacity == doctest::Approx(16.0));  // B = n*lambda
    CHECK(s.spec.policy.type == PolicyType::Asuman);
    CHECK(s.spec.policy.c_coeff == doctest::Approx(1.0 / 16.0));  // C = 1/n
    CHECK(s.spec.profile.per_node.size() == 16);
    CHECK(s.spec.profile.sum() == doctest::Approx(1.0));
    CHECK(s.run.epochs == 100);
    CHECK(s.run.warmup_epochs == 20);  // 20% of epochs
    CHECK(s.run.replications == 1);
    CHECK(s.run.seed == 1);
}

TEST_CASE("explicit values override the defaults") {
    Scenario s = make(R"({
        "topology": {"kind": "partial", "n": 10, "q": 0.5},
        "rates": {"lambda_e": 2.0, "lambda": 4.0, "B": 37.5},
        "policy": {"kind": "asuman", "C": 0.125, "frozen": true},
        "run": {"epochs": 50, "warmup_epochs": 5, "replications": 3, "seed": 99}
    })");
    CHECK(s.spec.topology.kind == TopologyKind::Partial);
    CHECK(s.spec.topology.q == 0.5);
    CHECK(s.spec.rates.lambda_e == 2.0);
    CHECK(s.spec.rates.lambda_total == 4.0);
    CHECK(s.spec.rates.gossip_capacity == 37.5);
    CHECK(s.spec.policy.type == PolicyType::AsumanFrozen);
    CHECK(s.spec.policy.c_coeff == 0.125);
    CHECK(s.run.warmup_epochs == 5);
    CHECK(s.run.replications == 3);
    CHECK(s.run.seed == 99);
}

TEST_CASE("clustered scenarios") {
    SUBCASE("n splits into round(sqrt(n)) clusters") {
        Scenario s = make(R"({"topology": {"kind": "clustered", "n": 144}, "run": {"epochs": 10}})");
        CHECK(s.spec.topology.clusters == 12);
        CHECK(s.spec.topology.cluster_size == 12);
        CHECK(s.spec.topology.n == 12 * 13);  // 12 heads on top of the 144 leaves
        // hierarchical policy and head-fed profile are implied
        CHECK(s.spec.policy.type == PolicyType::Hierarchical);
        CHECK(s.spec.policy.head_policy == HeadPolicy::FullAsuman);
        CHECK(s.spec.policy.p_split == 0.5);
        for (int i = 0; i < s.spec.topology.n; ++i) {
            if (s.spec.topology.head(i))
                CHECK(s.spec.profile.per_node[i] == doctest::Approx(1.0 / 12.0));
            else
                CHECK(s.spec.profile.per_node[i] == 0.0);
        }
    }
    SUBCASE("explicit c and m with ring heads") {
        Scenario s = make(R"({
            "topology": {"kind": "clustered", "c": 4, "m": 6, "head_links": "ring"},
            "policy": {"kind": "hierarchical", "p": 0.25},
            "run": {"epochs": 10}
        })");
        CHECK(s.spec.topology.clusters == 4);
        CHECK(s.spec.topology.cluster_size == 6);
        CHECK(s.spec.policy.head_policy == HeadPolicy::Ring);
        CHECK(s.spec.policy.p_split == 0.25);
    }
    SUBCASE("disconnected heads default to p = 1") {
        Scenario s = make(R"({
            "topology": {"kind": "clustered", "c": 3, "m": 4, "head_links": "none"},
            "run": {"epochs": 10}
        })");
        CHECK(s.spec.policy.head_policy == HeadPolicy::Disconnected);
        CHECK(s.spec.policy.p_split == 1.0);
    }
    SUBCASE("n that does not split is rejected") {
        CHECK(throws_mentioning(
            R"({"topology": {"kind": "clustered", "n": 150}, "run": {"epochs": 10}})", "round(sqrt"));
    }
    SUBCASE("power law profile is rejected on clusters") {
        CHECK(throws_mentioning(R"({
            "topology": {"kind": "clustered", "n": 64},
            "profile": {"kind": "power_law", "nu": 0.5},
            "run": {"epochs": 10}
        })",
                                "power_law"));
    }
}

TEST_CASE("power law profile") {
    Scenario s = make(R"({
        "topology": {"kind": "complete", "n": 5},
        "profile": {"kind": "power_law", "nu": 0.75},
        "run": {"epochs": 10}
    })");
    CHECK(s.spec.profile.per_node[0] > s.spec.profile.per_node[4]);
    CHECK(s.spec.profile.sum() == doctest::Approx(1.0));
}

TEST_CASE("strict parsing rejects malformed input") {
    CHECK_THROWS_AS(parse_scenario_text("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_text("[1, 2]"), std::invalid_argument);
    // missing required blocks
    CHECK_THROWS_AS(parse_scenario_text(R"({"run": {"epochs": 5}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario_text(R"({"topology": {"kind": "complete", "n": 4}})"),
                    std::invalid_argument);

    SUBCASE("unknown keys are named in the error") {
        CHECK(throws_mentioning(
            R"({"topology": {"kind": "complete", "n": 4, "foo": 1}, "run": {"epochs": 5}})", "foo"));
        CHECK(throws_mentioning(
            R"({"topology": {"kind": "complete", "n": 4}, "run": {"epochs": 5}, "extra": {}})", "extra"));
        CHECK(throws_mentioning(
            R"({"topology": {"kind": "complete", "n": 4}, "run": {"epochs": 5, "reps": 2}})", "reps"));
    }
    SUBCASE("bad field values") {
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "septagon", "n": 4}, "run": {"epochs": 5}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "complete", "n": 0}, "run": {"epochs": 5}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "partial", "n": 8, "q": 0.0}, "run": {"epochs": 5}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "grid", "rows": 1, "cols": 5}, "run": {"epochs": 5}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "complete", "n": 4}, "run": {"epochs": 0}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            parse_scenario_text(
                R"({"topology": {"kind": "complete", "n": 4}, "run": {"epochs": 5, "warmup_epochs": 5}})"),
            std::invalid_argument);
        CHECK_THROWS_AS(
            parse_scenario_text(
                R"({"topology": {"kind": "complete", "n": 4}, "run": {"epochs": 5, "replications": 0}})"),
            std::invalid_argument);
        CHECK_THROWS_AS(parse_scenario_text(
                            R"({"topology": {"kind": "complete", "n": 4.5}, "run": {"epochs": 5}})"),
                        std::invalid_argument);
        CHECK_THROWS_AS(
            parse_scenario_text(
                R"({"topology": {"kind": "complete", "n": 4}, "rates": {"lambda": 0}, "run": {"epochs": 5}})"),
            std::invalid_argument);
        CHECK_THROWS_AS(
            parse_scenario_text(
                R"({"topology": {"kind": "complete", "n": 4}, "rates": {"B": -1}, "run": {"epochs": 5}})"),
            std::invalid_argument);
    }
    SUBCASE("policy constraints") {
        CHECK(throws_mentioning(R"({
            "topology": {"kind": "complete", "n": 4},
            "policy": {"kind": "uniform", "frozen": true},
            "run": {"epochs": 5}
        })",
                                "frozen"));
        CHECK(throws_mentioning(R"({
            "topology": {"kind": "complete", "n": 4},
            "policy": {"kind": "uniform", "C": 0.5},
            "run": {"epochs": 5}
        })",
                                "C"));
        CHECK(throws_mentioning(R"({
            "topology": {"kind": "complete", "n": 4},
            "policy": {"kind": "asuman", "p": 0.5},
            "run": {"epochs": 5}
        })",
                                "p"));
        // partial topologies pair with asuman only
        CHECK(throws_mentioning(R"({
            "topology": {"kind": "partial", "n": 8, "q": 0.5},
            "policy": {"kind": "uniform"},
            "run": {"epochs": 5}
        })",
                                "partial"));
        // explicit hierarchical on a flat topology fails validation
        CHECK_THROWS_AS(make(R"({
            "topology": {"kind": "complete", "n": 4},
            "policy": {"kind": "hierarchical"},
            "run": {"epochs": 5}
        })"),
                        std::invalid_argument);
    }
}

TEST_CASE("sweep rewrites one parameter and rebuilds the defaults") {
    ScenarioDesc base =
        parse_scenario_text(R"({"topology": {"kind": "complete", "n": 16}, "run": {"epochs": 100}})");

    SUBCASE("n on a flat topology recomputes B and C") {
        apply_sweep_value(base, "n", 32);
        Scenario s = build_scenario(base);
        CHECK(s.spec.topology.n == 32);
        CHECK(s.spec.rates.gossip_capacity == doctest::Approx(32.0));
        CHECK(s.spec.policy.c_coeff == doctest::Approx(1.0 / 32.0));
    }
    SUBCASE("explicit B survives an n sweep") {
        ScenarioDesc d = parse_scenario_text(R"({
            "topology": {"kind": "complete", "n": 16},
            "rates": {"B": 5.0},
            "run": {"epochs": 100}
        })");
        apply_sweep_value(d, "n", 32);
        CHECK(build_scenario(d).spec.rates.gossip_capacity == 5.0);
    }
    SUBCASE("n on a clustered topology keeps c = round(sqrt(n))") {
        ScenarioDesc d = parse_scenario_text(
            R"({"topology": {"kind": "clustered", "n": 64}, "run": {"epochs": 100}})");
        apply_sweep_value(d, "n", 144);
        Scenario s = build_scenario(d);
        CHECK(s.spec.topology.clusters == 12);
        CHECK(s.spec.topology.cluster_size == 12);
        CHECK_THROWS_AS(apply_sweep_value(d, "n", 150), std::invalid_argument);
    }
    SUBCASE("q requires a partial topology") {
        ScenarioDesc d = parse_scenario_text(
            R"({"topology": {"kind": "partial", "n": 16, "q": 0.5}, "run": {"epochs": 100}})");
        apply_sweep_value(d, "q", 0.25);
        CHECK(build_scenario(d).spec.topology.q == 0.25);
        CHECK_THROWS_AS(apply_sweep_value(base, "q", 0.25), std::invalid_argument);
        CHECK_THROWS_AS(apply_sweep_value(d, "q", 0.0), std::invalid_argument);
    }
    SUBCASE("nu requires a power law profile") {
        ScenarioDesc d = parse_scenario_text(R"({
            "topology": {"kind": "complete", "n": 16},
            "profile": {"kind": "power_law", "nu": 0.5},
            "run": {"epochs": 100}
        })");
        apply_sweep_value(d, "nu", 0.75);
        CHECK(d.nu == 0.75);
        CHECK_THROWS_AS(apply_sweep_value(base, "nu", 0.75), std::invalid_argument);
    }
    SUBCASE("p and c apply to clustered scenarios") {
        ScenarioDesc d = parse_scenario_text(
            R"({"topology": {"kind": "clustered", "c": 4, "m": 6}, "run": {"epochs": 100}})");
        apply_sweep_value(d, "p", 0.75);
        CHECK(build_scenario(d).spec.policy.p_split == 0.75);
        apply_sweep_value(d, "c", 6);
        CHECK(build_scenario(d).spec.topology.clusters == 6);
        CHECK_THROWS_AS(apply_sweep_value(base, "p", 0.5), std::invalid_argument);
        CHECK_THROWS_AS(apply_sweep_value(base, "c", 6), std::invalid_argument);
    }
    SUBCASE("grids do not sweep n, counts must be integers") {
        ScenarioDesc d = parse_scenario_text(
            R"({"topology": {"kind": "grid", "rows": 3, "cols": 3}, "run": {"epochs": 100}})");
        CHECK_THROWS_AS(apply_sweep_value(d, "n", 16), std::invalid_argument);
        CHECK_THROWS_AS(apply_sweep_value(base, "n", 16.5), std::invalid_argument);
        CHECK_THROWS_AS(apply_sweep_value(base, "zz", 1), std::invalid_argument);
    }
}

TEST_CASE("sim config carries the run parameters") {
    Scenario s = make(R"({
        "topology": {"kind": "complete", "n": 8},
        "run": {"epochs": 60, "warmup_epochs": 12, "seed": 5}
    })");
    SimConfig cfg = make_sim_config(s, 4, 12345);
    CHECK(cfg.horizon_epochs == 60);
    CHECK(cfg.warmup_epochs == 12);
    CHECK(cfg.seed == 12345);
    CHECK(cfg.replication == 4);
    CHECK(cfg.spec.topology.n == 8);
}

TEST_CASE("load_scenario reports filesystem trouble as IoError") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/path/to/scenario.json"), IoError);
}
