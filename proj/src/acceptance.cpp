#include "asuman/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "asuman/bounds.hpp"
#include "asuman/engine.hpp"
#include "asuman/metrics.hpp"
#include "asuman/orchestrate.hpp"
#include "asuman/scenario.hpp"

namespace asuman::acceptance {

namespace {

struct Tuning {
    int reps = 20;
    std::int64_t k_single = 20000;
    std::int64_t k_min_age = 5000;
    std::int64_t k_scaling = 2500;
    std::int64_t k_ring = 8000;
    std::vector<int> scaling_ns = {50, 100, 200, 400};
    std::vector<int> partial_ns = {50, 100, 200};
    std::vector<int> partial_bound_ns = {100, 200};
    std::vector<int> ring_ns = {30, 60};
    std::vector<std::pair<int, int>> cluster_shapes = {{8, 8}, {12, 12}, {16, 16}};
    std::vector<double> nus = {0.35, 0.75, 0.95};
    std::int64_t mc_reps = 100000;
    std::int64_t mc_tail_reps = 20000;
};

Tuning tuning_for(Level level) {
    Tuning t;
    if (level == Level::Quick) {
        t.reps = 8;
        t.k_single = 4000;
        t.k_min_age = 1500;
        t.k_scaling = 600;
        t.k_ring = 2500;
        t.scaling_ns = {50, 100, 200};
        t.partial_bound_ns = {100};
        t.ring_ns = {30};
        t.cluster_shapes = {{6, 6}, {8, 8}, {10, 10}};
        t.nus = {0.35, 0.95};
        t.mc_reps = 20000;
        t.mc_tail_reps = 5000;
    } else if (level == Level::Full) {
        t.scaling_ns = {50, 100, 200, 400, 600};
    }
    return t;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Checks {
    bool ok = true;
    int passed = 0;
    std::vector<std::string> notes;
    std::vector<std::string> failures;

    void require(bool cond, const std::string& label) {
        if (cond)
            ++passed;
        else {
            ok = false;
            failures.push_back(label);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
    std::string text() const {
        std::string out;
        for (const auto& s : notes) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        if (!out.empty()) out += "; ";
        out += std::to_string(passed) + " checks ok";
        if (!failures.empty()) {
            out += "; FAILED:";
            for (const auto& f : failures) out += " [" + f + "]";
        }
        return out;
    }
};

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe net_mean_se(const EnsembleStatistics& st) {
    return {st.network_mean, st.network_stderr ? *st.network_stderr : 0.0};
}

MeanSe across(const std::vector<double>& vals) {
    double sum = 0.0, sumsq = 0.0;
    for (double v : vals) {
        sum += v;
        sumsq += v * v;
    }
    const double r = static_cast<double>(vals.size());
    MeanSe out;
    out.mean = sum / r;
    if (vals.size() > 1) {
        double var = (sumsq - sum * sum / r) / (r - 1.0);
        out.se = std::sqrt(std::max(var, 0.0) / r);
    }
    return out;
}

MeanSe subset_mean_se(const std::vector<RunStatistics>& runs, const std::vector<std::int32_t>& ids) {
    std::vector<double> vals;
    vals.reserve(runs.size());
    for (const auto& run : runs) {
        double v = 0.0;
        for (auto id : ids) v += run.node_mean_age[static_cast<std::size_t>(id)];
        vals.push_back(v / static_cast<double>(ids.size()));
    }
    return across(vals);
}

Scenario flat(TopologyKind kind, int n, double q, const PolicyKind& policy, double lambda_e,
              std::int64_t epochs, int reps, std::uint64_t seed) {
    Scenario s;
    switch (kind) {
        case TopologyKind::Complete:
            s.spec.topology = build_complete(n);
            break;
        case TopologyKind::Partial:
            s.spec.topology = build_partial(n, q);
            break;
        case TopologyKind::Ring:
            s.spec.topology = build_ring(n);
            break;
        default:
            throw std::logic_error("flat: unsupported topology kind");
    }
    s.spec.rates = Rates{lambda_e, 1.0, static_cast<double>(n)};
    s.spec.profile = rate_profile_uniform(1.0, n);
    s.spec.policy = policy;
    s.run.epochs = epochs;
    s.run.warmup_epochs = epochs / 5;
    s.run.replications = reps;
    s.run.seed = seed;
    return s;
}

Scenario clustered_scn(int c, int m, HeadPolicy head, double p, std::int64_t epochs, int reps,
                       std::uint64_t seed) {
    const HeadLinks links = head == HeadPolicy::Disconnected ? HeadLinks::None
                            : head == HeadPolicy::Ring       ? HeadLinks::Ring
                                                             : HeadLinks::Complete;
    Scenario s;
    s.spec.topology = build_clustered(c, m, links);
    const int n = s.spec.topology.n;
    s.spec.rates = Rates{1.0, 1.0, static_cast<double>(n)};
    s.spec.profile = rate_profile_cluster_heads(1.0, s.spec.topology);
    s.spec.policy = PolicyKind::hierarchical(p, head, 1.0 / n);
    s.run.epochs = epochs;
    s.run.warmup_epochs = epochs / 5;
    s.run.replications = reps;
    s.run.seed = seed;
    return s;
}

Scenario power_scn(int n, double nu, std::int64_t epochs, int reps, std::uint64_t seed) {
    Scenario s;
    s.spec.topology = build_complete(n);
    s.spec.rates = Rates{1.0, 1.0, static_cast<double>(n)};
    s.spec.profile = rate_profile_power_law(1.0, nu, n);
    s.spec.policy = PolicyKind::asuman(1.0 / n);
    s.run.epochs = epochs;
    s.run.warmup_epochs = epochs / 5;
    s.run.replications = reps;
    s.run.seed = seed;
    return s;
}

// ---------------------------------------------------------------- criterion 1

CriterionResult c1_single_node(const Tuning& t, int jobs) {
    CriterionResult res{1, "single_node_age_oracle", false, "", 0.0};
    Checks ck;

    // stationary mean of the single-node age chain, summed numerically:
    // P(age = j) proportional to (lambda_e / (lambda_e + lambda))^j
    const double ratio = 1.0 / 2.0;
    double oracle = 0.0;
    for (int j = 1; j < 800; ++j) oracle += j * std::pow(ratio, j);
    oracle *= 1.0 - ratio;
    ck.require(std::fabs(oracle - 1.0) <= 1e-9, "oracle sum = lambda_e/lambda");

    auto s = flat(TopologyKind::Complete, 1, 1.0, PolicyKind::asuman(1.0), 1.0, t.k_single,
                  t.reps, 1001);
    auto ens = run_ensemble(s, 0, jobs);
    MeanSe ms = net_mean_se(ens.stats);
    ck.note("mean=" + fmt(ms.mean) + " se=" + fmt(ms.se) + " oracle=" + fmt(oracle));
    ck.require(std::fabs(ms.mean - oracle) <= 3.0 * ms.se, "single node mean within 3 se");

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 2

CriterionResult c2_min_age_limit(const Tuning& t, int jobs) {
    CriterionResult res{2, "epoch_min_age_limit", false, "", 0.0};
    Checks ck;

    auto s = flat(TopologyKind::Complete, 100, 1.0, PolicyKind::asuman(0.01), 1.0, t.k_min_age,
                  t.reps, 1002);
    auto ens = run_ensemble(s, 0, jobs);

    std::vector<double> lates;
    bool first_sample_ok = true;
    for (const auto& run : ens.runs) {
        lates.push_back(run.late_min_age_mean);
        if (run.min_age_series.size() > 1 && run.min_age_series[1] != 1) first_sample_ok = false;
    }
    MeanSe ms = across(lates);
    const double target = bounds::min_age_limit(1.0, 1.0);
    ck.note("late_mean=" + fmt(ms.mean) + " se=" + fmt(ms.se) + " target=" + fmt(target));
    ck.require(first_sample_ok, "first epoch min age is exactly 1");
    ck.require(std::fabs(ms.mean - target) <= 0.03 * target, "late epoch min age within 3%");

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 3

CriterionResult c3_asuman_scaling(const Tuning& t, int jobs) {
    CriterionResult res{3, "asuman_age_constant_in_n", false, "", 0.0};
    Checks ck;
    std::uint64_t idx = 0;
    for (double le : {1.0, 2.0}) {
        const double cap = bounds::asuman_ub_limit(le, 1.0);
        std::vector<std::pair<double, double>> pts;
        std::string means;
        for (int n : t.scaling_ns) {
            auto s = flat(TopologyKind::Complete, n, 1.0, PolicyKind::asuman(1.0 / n), le,
                          t.k_scaling, t.reps, 1003);
            auto ens = run_ensemble(s, idx++, jobs);
            MeanSe ms = net_mean_se(ens.stats);
            ck.require(ms.mean <= cap + 3.0 * ms.se,
                       "le=" + fmt(le) + " n=" + std::to_string(n) + " mean " + fmt(ms.mean) +
                           " <= " + fmt(cap));
            pts.emplace_back(static_cast<double>(n), ms.mean);
            if (!means.empty()) means += "/";
            means += fmt(ms.mean);
        }
        ck.note("le=" + fmt(le) + " means " + means);
        ck.require(fit_beats(pts, ScalingModel::Constant, ScalingModel::Log),
                   "le=" + fmt(le) + " constant fit beats log");
    }
    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 4

CriterionResult c4_uniform_scaling(const Tuning& t, int jobs) {
    CriterionResult res{4, "uniform_age_grows_with_log_n", false, "", 0.0};
    Checks ck;
    std::vector<std::pair<double, double>> pts;
    double a_100 = 0.0, a_hi = 0.0;
    std::string means;
    std::uint64_t idx = 0;
    for (int n : t.scaling_ns) {
        auto s = flat(TopologyKind::Complete, n, 1.0, PolicyKind::uniform(), 1.0, t.k_scaling,
                      t.reps, 1004);
        auto ens = run_ensemble(s, idx++, jobs);
        MeanSe ms = net_mean_se(ens.stats);
        pts.emplace_back(static_cast<double>(n), ms.mean);
        if (n == 100) a_100 = ms.mean;
        if (n == t.scaling_ns.back()) a_hi = ms.mean;
        if (!means.empty()) means += "/";
        means += fmt(ms.mean);
    }
    ck.note("means " + means);
    ck.require(fit_beats(pts, ScalingModel::Log, ScalingModel::Constant), "log fit beats constant");
    ck.require(fit_beats(pts, ScalingModel::Log, ScalingModel::Sqrt), "log fit beats sqrt");

    const int n_hi = t.scaling_ns.back();
    const double ratio = a_hi / a_100;
    const double target = std::log(static_cast<double>(n_hi)) / std::log(100.0);
    ck.note("ratio a(" + std::to_string(n_hi) + ")/a(100)=" + fmt(ratio) + " target=" + fmt(target));
    ck.require(ratio >= 0.85 * target && ratio <= 1.15 * target, "growth ratio within 15%");

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 5

CriterionResult c5_partial(const Tuning& t, int jobs) {
    CriterionResult res{5, "partial_connectivity_flat", false, "", 0.0};
    Checks ck;
    const std::array<double, 2> qs = {0.5, 1.0 / 3.0};
    std::uint64_t idx = 0;
    // means[qi][n] for the monotonicity comparison
    std::vector<std::vector<std::pair<int, double>>> by_q(qs.size());
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const double q = qs[qi];
        const double cap = bounds::partial_ub(q, 1.0, 1.0);
        std::vector<std::pair<double, double>> pts;
        std::string means;
        for (int n : t.partial_ns) {
            auto s = flat(TopologyKind::Partial, n, q, PolicyKind::asuman(1.0 / n), 1.0,
                          t.k_scaling, t.reps, 1005);
            auto ens = run_ensemble(s, idx++, jobs);
            MeanSe ms = net_mean_se(ens.stats);
            pts.emplace_back(static_cast<double>(n), ms.mean);
            by_q[qi].emplace_back(n, ms.mean);
            if (std::find(t.partial_bound_ns.begin(), t.partial_bound_ns.end(), n) !=
                t.partial_bound_ns.end()) {
                ck.require(ms.mean <= cap + 3.0 * ms.se, "q=" + fmt(q) + " n=" +
                                                             std::to_string(n) + " mean " +
                                                             fmt(ms.mean) + " <= " + fmt(cap));
            }
            if (!means.empty()) means += "/";
            means += fmt(ms.mean);
        }
        ck.note("q=" + fmt(q) + " means " + means);
        ck.require(fit_beats(pts, ScalingModel::Constant, ScalingModel::Log),
                   "q=" + fmt(q) + " constant fit beats log");
    }
    for (int n : t.partial_bound_ns) {
        double sparse = 0.0, dense = 0.0;
        for (const auto& [nn, mean] : by_q[0])
            if (nn == n) dense = mean;
        for (const auto& [nn, mean] : by_q[1])
            if (nn == n) sparse = mean;
        ck.require(sparse > dense, "n=" + std::to_string(n) + " age rises as q drops (" +
                                       fmt(sparse) + " > " + fmt(dense) + ")");
    }
    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 6

CriterionResult c6_ring(const Tuning& t, int jobs) {
    CriterionResult res{6, "ring_age_linear_in_n", false, "", 0.0};
    Checks ck;
    std::uint64_t idx = 0;
    MeanSe asuman_last;
    for (int n : t.ring_ns) {
        auto s = flat(TopologyKind::Ring, n, 1.0, PolicyKind::asuman(1.0 / n), 1.0, t.k_ring,
                      t.reps, 1006);
        auto ens = run_ensemble(s, idx++, jobs);
        MeanSe ms = net_mean_se(ens.stats);
        const double lb = bounds::ring_lb(n, 1.0, 1.0);
        ck.note("n=" + std::to_string(n) + " mean=" + fmt(ms.mean) + " lb=" + fmt(lb));
        ck.require(ms.mean >= lb - 3.0 * ms.se, "n=" + std::to_string(n) + " mean above lower bound");
        asuman_last = ms;
    }
    const int n_cmp = t.ring_ns.back();
    auto su = flat(TopologyKind::Ring, n_cmp, 1.0, PolicyKind::uniform(), 1.0, t.k_ring, t.reps,
                   1006);
    auto ens_u = run_ensemble(su, idx++, jobs);
    MeanSe mu = net_mean_se(ens_u.stats);
    ck.note("uniform n=" + std::to_string(n_cmp) + " mean=" + fmt(mu.mean));
    ck.require(mu.mean + 3.0 * mu.se < asuman_last.mean - 3.0 * asuman_last.se,
               "uniform ring age strictly below minimum-age policy");

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 7

CriterionResult c7_clustered(const Tuning& t, int jobs) {
    CriterionResult res{7, "clustered_scalings", false, "", 0.0};
    Checks ck;
    // Log is left out of the candidate pool on purpose: over the simulated
    // cluster sizes ln(n) and n^(1/4) are proportional to within a few
    // percent, so no finite experiment can tell them apart, and neither the
    // sqrt nor the quarter-power growth claim involves a log shape.
    const std::array<ScalingModel, 4> candidates = {ScalingModel::Constant, ScalingModel::Sqrt,
                                                    ScalingModel::Linear,
                                                    ScalingModel::QuarterPower};
    const double leaf_cap = bounds::cluster_optimum(1.0, 1.0).value;
    std::uint64_t idx = 0;

    struct Variant {
        HeadPolicy head;
        double p;
        ScalingModel expect;
        const char* label;
    };
    const std::array<Variant, 3> variants = {{{HeadPolicy::FullAsuman, 0.5, ScalingModel::Constant, "full"},
                                              {HeadPolicy::Disconnected, 1.0, ScalingModel::Sqrt, "disconnected"},
                                              {HeadPolicy::Ring, 0.5, ScalingModel::QuarterPower, "ring"}}};
    for (const auto& var : variants) {
        std::vector<std::pair<double, double>> pts;
        std::string means;
        for (const auto& [c, m] : t.cluster_shapes) {
            auto s = clustered_scn(c, m, var.head, var.p, t.k_scaling, t.reps, 1007);
            auto ens = run_ensemble(s, idx++, jobs);
            MeanSe leaf = subset_mean_se(ens.runs, s.spec.topology.leaf_ids());
            pts.emplace_back(static_cast<double>(c * m), leaf.mean);
            if (var.head == HeadPolicy::FullAsuman) {
                ck.require(leaf.mean <= leaf_cap + 3.0 * leaf.se,
                           "full c=" + std::to_string(c) + " leaf mean " + fmt(leaf.mean) +
                               " <= " + fmt(leaf_cap));
            }
            if (!means.empty()) means += "/";
            means += fmt(leaf.mean);
        }
        ScalingModel best = best_scaling_model(pts, candidates);
        ck.note(std::string(var.label) + " means " + means + " best=" + scaling_model_name(best));
        ck.require(best == var.expect,
                   std::string(var.label) + " scaling is " + scaling_model_name(var.expect));
    }
    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 8

CriterionResult c8_power_law(const Tuning& t, int jobs) {
    CriterionResult res{8, "power_law_per_node_bounds", false, "", 0.0};
    Checks ck;
    const int n = 100;
    std::uint64_t idx = 0;
    for (double nu : t.nus) {
        auto s = power_scn(n, nu, t.k_scaling, t.reps, 1008);
        auto ens = run_ensemble(s, idx++, jobs);
        int bound_viols = 0, cap_viols = 0;
        double worst_gap = -1e300;
        for (int i = 0; i < n; ++i) {
            const double mean = ens.stats.node_mean[static_cast<std::size_t>(i)];
            const double se = ens.stats.node_stderr.empty()
                                  ? 0.0
                                  : ens.stats.node_stderr[static_cast<std::size_t>(i)];
            const double ub = bounds::power_law_ub(i + 1, nu, n, 1.0, 1.0);
            if (mean > ub + 3.0 * se) ++bound_viols;
            if (mean > 3.0 + 3.0 * se) ++cap_viols;
            worst_gap = std::max(worst_gap, mean - ub);
        }
        const double rho = spearman_rank_correlation(s.spec.profile.per_node, ens.stats.node_mean);
        ck.note("nu=" + fmt(nu) + " worst_gap=" + fmt(worst_gap) + " rho=" + fmt(rho));
        ck.require(bound_viols == 0, "nu=" + fmt(nu) + " per-node bounds hold");
        ck.require(cap_viols == 0, "nu=" + fmt(nu) + " all node means <= 3");
        ck.require(rho < 0.0, "nu=" + fmt(nu) + " age anti-correlated with update rate");
    }
    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// ---------------------------------------------------------------- criterion 9

// Replays every event against an independent shadow model of the update rules
// and re-derives group state at each epoch start.
struct ShadowOutcome {
    std::string error;
    std::int64_t events = 0;
};

ShadowOutcome shadow_run(const SimConfig& cfg) {
    Simulation sim(cfg);
    const Topology& topo = cfg.spec.topology;
    const PolicyKind& pol = cfg.spec.policy;
    const Rates& rates = cfg.spec.rates;
    const int n = topo.n;

    std::vector<std::int64_t> v(static_cast<std::size_t>(n), 0);
    std::int64_t sv = 0;
    std::vector<std::int64_t> frozen(v);
    const bool frozen_mode = pol.type == PolicyType::AsumanFrozen;
    const bool hier = pol.type == PolicyType::Hierarchical;

    AgeAccumulator acc(n);
    bool measuring = cfg.warmup_epochs == 0;
    bool finished = false;
    double last_t = 0.0;
    std::int64_t epoch = 0;
    std::int64_t events = 0;
    std::string err;

    auto fail = [&](const std::string& msg) {
        if (err.empty()) err = msg + " (event " + std::to_string(events) + ")";
    };
    auto contains = [](const std::vector<std::int32_t>& xs, int x) {
        return std::binary_search(xs.begin(), xs.end(), static_cast<std::int32_t>(x));
    };

    int uniform_senders = 0;
    for (int i = 0; i < n; ++i)
        if (topo.degree(i) > 0) ++uniform_senders;

    auto expected_gossip_total = [&](const SimState& st) {
        if (pol.type == PolicyType::UniformGossip)
            return rates.lambda_total * uniform_senders;
        double total = 0.0;
        for (const auto& g : st.groups)
            if (g.phase == Phase::Gossiping) total += g.capacity;
        if (hier && pol.head_policy == HeadPolicy::Ring)
            total += topo.clusters * (1.0 - pol.p_split) * rates.lambda_total;
        return total;
    };

    auto validate_groups = [&](const SimState& st, double now) {
        if (pol.type == PolicyType::UniformGossip) return;
        std::size_t expected_groups =
            hier ? static_cast<std::size_t>(topo.clusters) +
                       (pol.head_policy == HeadPolicy::FullAsuman ? 1u : 0u)
                 : 1u;
        if (st.groups.size() != expected_groups) {
            fail("unexpected group count");
            return;
        }
        for (std::size_t gi = 0; gi < st.groups.size(); ++gi) {
            const GroupState& g = st.groups[gi];
            std::vector<std::int32_t> members;
            double capacity = 0.0;
            if (!hier) {
                members.resize(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = i;
                capacity = n >= 2 ? rates.gossip_capacity : 0.0;
            } else if (gi < static_cast<std::size_t>(topo.clusters)) {
                for (int i = 0; i < n; ++i)
                    if (topo.cluster_of[static_cast<std::size_t>(i)] == static_cast<int>(gi) &&
                        !topo.head(i))
                        members.push_back(static_cast<std::int32_t>(i));
                capacity = topo.cluster_size * rates.lambda_total;
            } else {
                for (int i = 0; i < n; ++i)
                    if (topo.head(i)) members.push_back(static_cast<std::int32_t>(i));
                capacity = topo.clusters * (1.0 - pol.p_split) * rates.lambda_total;
            }
            if (g.members != members) {
                fail("group members mismatch");
                return;
            }
            if (std::fabs(g.capacity - capacity) > 1e-9 * std::max(1.0, capacity)) {
                fail("group capacity mismatch");
                return;
            }
            std::int64_t min_age = sv - v[static_cast<std::size_t>(members[0])];
            for (auto id : members)
                min_age = std::min(min_age, sv - v[static_cast<std::size_t>(id)]);
            std::vector<std::int32_t> active;
            for (auto id : members)
                if (sv - v[static_cast<std::size_t>(id)] == min_age) active.push_back(id);
            if (g.min_age != min_age || g.active != active) {
                fail("minimum-age set mismatch at epoch start");
                return;
            }
            const double sense = pol.c_coeff * static_cast<double>(min_age);
            if (sense > 0.0) {
                if (g.phase != Phase::Sensing ||
                    std::fabs(g.gossip_start - (now + sense)) > 1e-9 * std::max(1.0, now + sense))
                    fail("sensing window mismatch");
            } else if (g.phase != Phase::Gossiping) {
                fail("group should gossip immediately");
            }
            if (topo.kind == TopologyKind::Partial) {
                const int want = std::max(1, static_cast<int>(topo.q * (n - 1)));
                if (g.targets.size() != g.active.size()) {
                    fail("partial targets not aligned with active set");
                    return;
                }
                for (std::size_t ai = 0; ai < g.targets.size(); ++ai) {
                    const auto& ts = g.targets[ai];
                    if (static_cast<int>(ts.size()) != want ||
                        !std::is_sorted(ts.begin(), ts.end()) ||
                        std::adjacent_find(ts.begin(), ts.end()) != ts.end() ||
                        contains(ts, g.active[ai]))
                        fail("partial target list malformed");
                    for (auto tgt : ts)
                        if (tgt < 0 || tgt >= n) fail("partial target out of range");
                }
            }
        }
    };

    sim.set_observer([&](const EventRecord& ev) {
        if (!err.empty()) return;
        ++events;
        const SimState& st = sim.state();
        if (ev.t < last_t) fail("time went backwards");
        if (measuring && !finished) {
            std::vector<std::int64_t> ages(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) ages[static_cast<std::size_t>(i)] = sv - v[static_cast<std::size_t>(i)];
            acc.accumulate(ages, ev.t - last_t);
        }
        last_t = ev.t;

        switch (ev.kind) {
            case EventKind::SourceSelfUpdate: {
                ++sv;
                ++epoch;
                if (ev.epoch != epoch) fail("epoch counter mismatch");
                if (epoch == cfg.warmup_epochs) {
                    acc = AgeAccumulator(n);
                    measuring = true;
                }
                if (epoch == cfg.horizon_epochs) {
                    finished = true;
                } else {
                    // groups (and frozen snapshots) are not rebuilt after the final self-update
                    if (frozen_mode) frozen = v;
                    validate_groups(st, ev.t);
                }
                break;
            }
            case EventKind::DirectUpdate: {
                if (ev.dst < 0 || ev.dst >= n) {
                    fail("direct target out of range");
                    break;
                }
                if (hier && !topo.head(ev.dst)) fail("direct update reached a leaf");
                v[static_cast<std::size_t>(ev.dst)] = sv;
                break;
            }
            case EventKind::RelayUpdate: {
                if (!hier) {
                    fail("relay without hierarchy");
                    break;
                }
                if (ev.src < 0 || ev.src >= n || ev.dst < 0 || ev.dst >= n ||
                    !topo.head(ev.src) || topo.head(ev.dst) ||
                    topo.cluster_of[static_cast<std::size_t>(ev.src)] !=
                        topo.cluster_of[static_cast<std::size_t>(ev.dst)]) {
                    fail("relay endpoints invalid");
                    break;
                }
                v[static_cast<std::size_t>(ev.dst)] =
                    std::max(v[static_cast<std::size_t>(ev.dst)], v[static_cast<std::size_t>(ev.src)]);
                break;
            }
            case EventKind::Gossip: {
                const int j = ev.src, l = ev.dst;
                if (j < 0 || j >= n || l < 0 || l >= n || j == l) {
                    fail("gossip endpoints invalid");
                    break;
                }
                std::int64_t send = 0;
                if (pol.type == PolicyType::UniformGossip) {
                    if (!contains(topo.adjacency[static_cast<std::size_t>(j)], l))
                        fail("uniform gossip to non-neighbor");
                    send = v[static_cast<std::size_t>(j)];
                } else if (hier && topo.head(j) && pol.head_policy == HeadPolicy::Ring) {
                    if (!topo.head(l) || !contains(topo.adjacency[static_cast<std::size_t>(j)], l))
                        fail("head ring gossip to invalid target");
                    send = v[static_cast<std::size_t>(j)];
                } else {
                    std::size_t gi = 0;
                    if (hier)
                        gi = topo.head(j) ? static_cast<std::size_t>(topo.clusters)
                                          : static_cast<std::size_t>(
                                                topo.cluster_of[static_cast<std::size_t>(j)]);
                    if (gi >= st.groups.size()) {
                        fail("gossip from unknown group");
                        break;
                    }
                    const GroupState& g = st.groups[gi];
                    if (g.phase != Phase::Gossiping) fail("gossip during sensing");
                    if (!contains(g.active, j)) fail("gossip from non-minimum node");
                    if (hier) {
                        if (topo.head(j)) {
                            if (!topo.head(l)) fail("head gossip to a leaf");
                        } else if (topo.head(l) ||
                                   topo.cluster_of[static_cast<std::size_t>(j)] !=
                                       topo.cluster_of[static_cast<std::size_t>(l)]) {
                            fail("leaf gossip left its cluster");
                        }
                    } else if (topo.kind == TopologyKind::Partial) {
                        const auto it = std::find(g.active.begin(), g.active.end(),
                                                  static_cast<std::int32_t>(j));
                        const std::size_t ai = static_cast<std::size_t>(it - g.active.begin());
                        if (ai >= g.targets.size() || !contains(g.targets[ai], l))
                            fail("partial gossip to unlisted target");
                    } else if (topo.kind != TopologyKind::Complete) {
                        if (!contains(topo.adjacency[static_cast<std::size_t>(j)], l))
                            fail("gossip to non-neighbor");
                    }
                    send = frozen_mode ? frozen[static_cast<std::size_t>(j)]
                                       : v[static_cast<std::size_t>(j)];
                }
                v[static_cast<std::size_t>(l)] = std::max(v[static_cast<std::size_t>(l)], send);
                break;
            }
            case EventKind::GossipPhaseStart: {
                if (ev.src < 0 || static_cast<std::size_t>(ev.src) >= st.groups.size()) {
                    fail("phase start for unknown group");
                    break;
                }
                const GroupState& g = st.groups[static_cast<std::size_t>(ev.src)];
                if (g.phase != Phase::Gossiping) fail("phase start left group sensing");
                if (std::fabs(ev.t - g.gossip_start) > 1e-9 * std::max(1.0, ev.t))
                    fail("phase start time off the control point");
                break;
            }
        }

        // post-event state must match the shadow exactly
        if (st.source_version != sv) fail("source version diverged");
        for (int i = 0; i < n; ++i) {
            if (st.node_versions[static_cast<std::size_t>(i)] != v[static_cast<std::size_t>(i)]) {
                fail("node version diverged at node " + std::to_string(i));
                break;
            }
            if (v[static_cast<std::size_t>(i)] > sv) fail("version ran ahead of the source");
        }
        if (frozen_mode && st.frozen_versions != frozen) fail("frozen snapshot diverged");

        RateTable rt = sim.event_rates();
        const double want_gossip = expected_gossip_total(st);
        if (pol.type == PolicyType::Asuman && topo.kind == TopologyKind::Complete && n >= 2) {
            if (rt.gossip_total != want_gossip) fail("complete-graph gossip rate not exactly B");
        } else if (std::fabs(rt.gossip_total - want_gossip) > 1e-9 * std::max(1.0, want_gossip)) {
            fail("gossip rate total mismatch");
        }
        if (events % 8 == 0) {
            double pair_sum = 0.0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    if (a != b) pair_sum += sim.pair_gossip_rate(a, b);
            if (std::fabs(pair_sum - want_gossip) > 1e-9 * std::max(1.0, want_gossip))
                fail("pairwise gossip rates do not add up to the total");
        }
    });

    RunStatistics stats = sim.run();
    if (err.empty()) {
        auto means = acc.node_means();
        for (int i = 0; i < n; ++i) {
            const double got = stats.node_mean_age[static_cast<std::size_t>(i)];
            if (std::fabs(means[static_cast<std::size_t>(i)] - got) >
                1e-9 * std::max(1.0, std::fabs(got)))
                fail("independent age integration disagrees at node " + std::to_string(i));
        }
        if (std::fabs(acc.window() - stats.window) > 1e-9 * std::max(1.0, stats.window))
            fail("measurement window mismatch");
        if (epoch != cfg.horizon_epochs) fail("run ended before the horizon");
    }
    return {err, events};
}

std::string determinism_check(const SimConfig& cfg) {
    auto capture = [&](std::uint64_t seed, std::vector<EventRecord>& out) {
        SimConfig c = cfg;
        c.seed = seed;
        Simulation sim(c);
        sim.set_observer([&](const EventRecord& ev) { out.push_back(ev); });
        return sim.run();
    };
    std::vector<EventRecord> t1, t2, t3;
    RunStatistics s1 = capture(cfg.seed, t1);
    RunStatistics s2 = capture(cfg.seed, t2);
    RunStatistics s3 = capture(cfg.seed + 1, t3);
    if (t1.size() != t2.size()) return "same seed produced different event counts";
    for (std::size_t i = 0; i < t1.size(); ++i) {
        if (t1[i].t != t2[i].t || t1[i].kind != t2[i].kind || t1[i].src != t2[i].src ||
            t1[i].dst != t2[i].dst || t1[i].epoch != t2[i].epoch)
            return "same seed produced diverging traces";
    }
    if (s1.node_mean_age != s2.node_mean_age || s1.window != s2.window)
        return "same seed produced different statistics";
    bool differs = t1.size() != t3.size();
    for (std::size_t i = 0; !differs && i < t1.size(); ++i)
        differs = t1[i].t != t3[i].t || t1[i].kind != t3[i].kind || t1[i].src != t3[i].src ||
                  t1[i].dst != t3[i].dst;
    if (!differs) return "different seeds produced identical traces";
    return "";
}

CriterionResult c9_engine_invariants(const Tuning&, int) {
    CriterionResult res{9, "engine_invariant_suite", false, "", 0.0};
    Checks ck;

    auto cfg_of = [](const Scenario& s, std::uint64_t seed) {
        return make_sim_config(s, 0, seed);
    };

    std::vector<std::pair<std::string, SimConfig>> cases;
    {
        auto add_flat = [&](const char* label, TopologyKind kind, int n, double q,
                            PolicyKind pol, std::uint64_t seed) {
            Scenario s = flat(kind, n, q, pol, 1.0, 400, 1, seed);
            s.run.warmup_epochs = 80;
            cases.emplace_back(label, cfg_of(s, seed));
        };
        add_flat("complete", TopologyKind::Complete, 8, 1.0, PolicyKind::asuman(0.25), 9001);
        add_flat("complete_frozen", TopologyKind::Complete, 8, 1.0, PolicyKind::asuman_frozen(0.25),
                 9002);
        add_flat("partial", TopologyKind::Partial, 9, 0.5, PolicyKind::asuman(0.2), 9003);
        add_flat("ring", TopologyKind::Ring, 8, 1.0, PolicyKind::asuman(0.2), 9004);
        add_flat("complete_uniform", TopologyKind::Complete, 8, 1.0, PolicyKind::uniform(), 9005);
        add_flat("ring_uniform", TopologyKind::Ring, 12, 1.0, PolicyKind::uniform(), 9006);
        add_flat("single", TopologyKind::Complete, 1, 1.0, PolicyKind::asuman(1.0), 9007);

        Scenario grid_open, grid_wrap;
        grid_open.spec.topology = build_grid(3, 4, false);
        grid_wrap.spec.topology = build_grid(3, 3, true);
        for (Scenario* g : {&grid_open, &grid_wrap}) {
            const int n = g->spec.topology.n;
            g->spec.rates = Rates{1.0, 1.0, static_cast<double>(n)};
            g->spec.profile = rate_profile_uniform(1.0, n);
            g->spec.policy = PolicyKind::asuman(0.2);
            g->run.epochs = 400;
            g->run.warmup_epochs = 80;
            g->run.replications = 1;
        }
        cases.emplace_back("grid_open", cfg_of(grid_open, 9008));
        cases.emplace_back("grid_wrap", cfg_of(grid_wrap, 9009));

        auto add_cluster = [&](const char* label, int c, int m, HeadPolicy head, double p,
                               std::uint64_t seed) {
            Scenario s = clustered_scn(c, m, head, p, 400, 1, seed);
            s.run.warmup_epochs = 80;
            cases.emplace_back(label, cfg_of(s, seed));
        };
        add_cluster("cluster_full", 3, 4, HeadPolicy::FullAsuman, 0.5, 9010);
        add_cluster("cluster_ring", 3, 4, HeadPolicy::Ring, 0.5, 9011);
        add_cluster("cluster_disconnected", 2, 4, HeadPolicy::Disconnected, 1.0, 9012);
    }

    std::int64_t total_events = 0;
    for (const auto& [label, cfg] : cases) {
        ShadowOutcome out = shadow_run(cfg);
        total_events += out.events;
        ck.require(out.error.empty(), label + ": " + (out.error.empty() ? "ok" : out.error));
    }
    ck.note(std::to_string(cases.size()) + " configs, " + std::to_string(total_events) +
            " events replayed");

    for (std::size_t i : {std::size_t{0}, std::size_t{10}}) {
        std::string derr = determinism_check(cases[i].second);
        ck.require(derr.empty(), cases[i].first + " determinism: " + (derr.empty() ? "ok" : derr));
    }

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

// --------------------------------------------------------------- criterion 10

CriterionResult c10_bounds(const Tuning& t, int) {
    CriterionResult res{10, "bounds_golden_and_recurrences", false, "", 0.0};
    Checks ck;
    namespace bd = asuman::bounds;
    auto rel_ok = [](double got, double want) {
        return std::fabs(got - want) <= 1e-9 * std::max(1.0, std::fabs(want));
    };

    struct G {
        const char* label;
        double got;
        double want;
    };
    const G goldens[] = {
        {"min_age_mean k0", bd::min_age_mean(0, 1.0, 1.0), 0.0},
        {"min_age_mean k1", bd::min_age_mean(1, 1.0, 1.0), 1.0},
        {"min_age_mean k2", bd::min_age_mean(2, 1.0, 1.0), 1.5},
        {"min_age_mean k3", bd::min_age_mean(3, 1.0, 1.0), 1.75},
        {"min_age_mean k2 le2", bd::min_age_mean(2, 2.0, 1.0), 5.0 / 3.0},
        {"min_age_limit", bd::min_age_limit(1.0, 1.0), 2.0},
        {"min_age_limit le2", bd::min_age_limit(2.0, 1.0), 3.0},
        {"asuman_ub n2", bd::asuman_ub(2, 2.0, 1.0, 1.0), 2.0},
        {"asuman_ub n4", bd::asuman_ub(4, 4.0, 1.0, 1.0), 44.0 / 19.0},
        {"asuman_ub_limit", bd::asuman_ub_limit(1.0, 1.0), 3.0},
        {"asuman_ub_limit le2", bd::asuman_ub_limit(2.0, 1.0), 5.0},
        {"sensing_envelope k1", bd::sensing_envelope(1, 1.0, 1.0), 1.0},
        {"sensing_envelope k2", bd::sensing_envelope(2, 1.0, 1.0), 2.5},
        {"sensing_envelope k3", bd::sensing_envelope(3, 1.0, 1.0), 3.25},
        {"sensing_envelope_limit", bd::sensing_envelope_limit(1.0, 1.0), 4.0},
        {"not_min_prob_lb n2", bd::not_min_prob_lb(2, 1.0, 1.0), 1.0 / 7.0},
        {"not_min_prob_lb n3", bd::not_min_prob_lb(3, 1.0, 1.0), 0.2},
        {"not_min_prob_lb_limit", bd::not_min_prob_lb_limit(1.0, 1.0), 1.0 / 3.0},
        {"not_min_prob_lb_limit le0", bd::not_min_prob_lb_limit(0.0, 1.0), 0.0},
        {"partial_pi q1", bd::partial_pi(1.0, 1.0, 1.0), 1.0 / 6.0},
        {"partial_pi q.5", bd::partial_pi(0.5, 1.0, 1.0), 1.0 / 9.0},
        {"partial_ub q1", bd::partial_ub(1.0, 1.0, 1.0), 8.0},
        {"partial_ub q.5", bd::partial_ub(0.5, 1.0, 1.0), 11.0},
        {"partial_ub q1/3", bd::partial_ub(1.0 / 3.0, 1.0, 1.0), 14.0},
        {"ring_lb n30", bd::ring_lb(30, 1.0, 1.0), 10.0},
        {"ring_lb n60", bd::ring_lb(60, 1.0, 1.0), 20.0},
        {"cluster_head_ub c4", bd::cluster_head_ub(4, 0.5, 1.0, 1.0), 28.0 / 11.0},
        {"cluster_head_ub_limit", bd::cluster_head_ub_limit(0.5, 1.0, 1.0), 4.0},
        {"cluster_leaf_ub m4", bd::cluster_leaf_ub(4, 0.5, 1.0, 1.0, 2.0), 38.0 / 7.0},
        {"cluster_leaf_ub_limit", bd::cluster_leaf_ub_limit(0.5, 1.0, 1.0), 8.0},
        {"cluster_optimum p", bd::cluster_optimum(1.0, 1.0).p_star, 0.5},
        {"cluster_optimum value", bd::cluster_optimum(1.0, 1.0).value, 8.0},
        {"cluster_optimum value le2", bd::cluster_optimum(2.0, 1.0).value, 14.0},
        {"disconnected_cluster_ub c10", bd::disconnected_cluster_ub(10, 1.0, 1.0), 13.0},
        {"ring_cluster_ub c8", bd::ring_cluster_ub(8, 0.5, 1.0, 1.0), 9.013256549262},
        {"asym_ub", bd::asym_ub(1.0, 2, 2.0, 1.0, 1.0), 5.0 / 3.0},
        {"asym_limits worst", bd::asym_limits(1.0, 1.0).worst, 3.0},
        {"asym_limits best", bd::asym_limits(1.0, 1.0).best, 1.5},
        {"power_law_ub", bd::power_law_ub(1, 0.5, 2, 1.0, 1.0), 15.0 / 8.0},
        {"power_law_ub_limit", bd::power_law_ub_limit(1, 0.35, 1.0, 1.0), 20.0 / 11.0},
    };
    for (const auto& g : goldens)
        ck.require(rel_ok(g.got, g.want), std::string(g.label) + " got " + fmt(g.got));

    bd::RecurrenceParams base;
    base.lambda_e = 1.0;
    base.lambda = 1.0;

    auto min_est = bd::mc_recurrence(bd::RecurrenceKind::MinAge, base, 50, t.mc_reps, 424242);
    int viols = 0;
    double max_z = 0.0;
    for (int k = 1; k <= 50; ++k) {
        const double want = bd::min_age_mean(k, 1.0, 1.0);
        const double z = std::fabs(min_est.mean[static_cast<std::size_t>(k)] - want) /
                         min_est.std_error[static_cast<std::size_t>(k)];
        max_z = std::max(max_z, z);
        if (z > 3.0) ++viols;
    }
    ck.note("mc_min_age max_z=" + fmt(max_z));
    ck.require(viols == 0, "minimum-age recurrence matches closed form for k <= 50");

    bd::RecurrenceParams le2 = base;
    le2.lambda_e = 2.0;
    auto min_est2 = bd::mc_recurrence(bd::RecurrenceKind::MinAge, le2, 20, t.mc_tail_reps, 424245);
    viols = 0;
    for (int k = 1; k <= 20; ++k) {
        const double want = bd::min_age_mean(k, 2.0, 1.0);
        if (std::fabs(min_est2.mean[static_cast<std::size_t>(k)] - want) >
            3.0 * min_est2.std_error[static_cast<std::size_t>(k)])
            ++viols;
    }
    ck.require(viols == 0, "minimum-age recurrence matches closed form at lambda_e=2");

    bd::RecurrenceParams ring = base;
    ring.n = 60;
    auto ring_est = bd::mc_recurrence(bd::RecurrenceKind::Ring, ring, 600, t.mc_tail_reps, 424243);
    {
        const double want = bd::ring_lb(60, 1.0, 1.0);
        const double got = ring_est.mean[600];
        const double se = ring_est.std_error[600];
        ck.note("mc_ring tail=" + fmt(got) + " se=" + fmt(se));
        ck.require(std::fabs(got - want) <= 3.0 * se, "ring recurrence fixed point near n/3");
    }

    auto sens = bd::mc_recurrence(bd::RecurrenceKind::Sensing, base, 60, t.mc_tail_reps, 424244);
    viols = 0;
    for (int k = 1; k <= 60; ++k) {
        if (sens.mean[static_cast<std::size_t>(k)] >
            bd::sensing_envelope(k, 1.0, 1.0) + 3.0 * sens.std_error[static_cast<std::size_t>(k)])
            ++viols;
    }
    ck.require(viols == 0, "sensing recurrence stays under its envelope");
    ck.require(std::fabs(sens.mean[60] - bd::sensing_envelope_limit(1.0, 1.0)) <=
                   3.0 * sens.std_error[60],
               "sensing recurrence tail near the envelope limit");

    bd::RecurrenceParams part = base;
    part.q = 0.5;
    auto pest = bd::mc_recurrence(bd::RecurrenceKind::Partial, part, 300, t.mc_tail_reps, 424246);
    ck.require(std::fabs(pest.mean[300] - bd::partial_ub(0.5, 1.0, 1.0)) <=
                   3.0 * pest.std_error[300],
               "partial recurrence tail matches its closed form");

    res.pass = ck.ok;
    res.details = ck.text();
    return res;
}

} // namespace

Level parse_level(const std::string& text) {
    if (text == "quick") return Level::Quick;
    if (text == "standard") return Level::Standard;
    if (text == "full") return Level::Full;
    throw std::invalid_argument("level must be quick, standard, or full");
}

std::string level_name(Level level) {
    switch (level) {
        case Level::Quick: return "quick";
        case Level::Standard: return "standard";
        case Level::Full: return "full";
    }
    return "unknown";
}

std::vector<CriterionResult> run_all(Level level, int jobs, std::ostream* progress) {
    const Tuning t = tuning_for(level);
    using Fn = CriterionResult (*)(const Tuning&, int);
    const std::array<Fn, 10> criteria = {c1_single_node,  c2_min_age_limit, c3_asuman_scaling,
                                         c4_uniform_scaling, c5_partial,    c6_ring,
                                         c7_clustered,    c8_power_law,     c9_engine_invariants,
                                         c10_bounds};
    std::vector<CriterionResult> out;
    out.reserve(criteria.size());
    for (Fn fn : criteria) {
        const auto started = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = fn(t, jobs);
        } catch (const std::exception& e) {
            r.id = static_cast<int>(out.size()) + 1;
            r.name = "criterion_" + std::to_string(r.id);
            r.pass = false;
            r.details = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        if (progress) {
            char line[160];
            std::snprintf(line, sizeof line, "[%2d] %s  %-32s (%.1fs)  ", r.id,
                          r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
            *progress << line << r.details << "\n" << std::flush;
        }
        out.push_back(std::move(r));
    }
    if (progress) *progress << summary_line(out) << "\n" << std::flush;
    return out;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

std::string summary_line(const std::vector<CriterionResult>& results) {
    int ok = 0;
    double secs = 0.0;
    for (const auto& r : results) {
        ok += r.pass ? 1 : 0;
        secs += r.seconds;
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "acceptance: %d/%zu criteria passed in %.1fs", ok,
                  results.size(), secs);
    return buf;
}

} // namespace asuman::acceptance
