#include "asuman/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace asuman {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty())
            out += "; ";
        out += p;
    }
    return out;
}

} // namespace

std::vector<std::int64_t> SimState::ages() const {
    std::vector<std::int64_t> out(node_versions.size());
    for (std::size_t i = 0; i < node_versions.size(); ++i)
        out[i] = source_version - node_versions[i];
    return out;
}

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::SourceSelfUpdate: return "self";
        case EventKind::DirectUpdate: return "direct";
        case EventKind::RelayUpdate: return "relay";
        case EventKind::Gossip: return "gossip";
        case EventKind::GossipPhaseStart: return "phase";
    }
    return "unknown";
}

std::string trace_line(const EventRecord& ev) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.10g %s %d %d %lld", ev.t, event_kind_name(ev.kind), ev.src,
                  ev.dst, static_cast<long long>(ev.epoch));
    return buf;
}

double RateTable::total() const {
    double s = source_self + gossip_total;
    for (double r : direct)
        s += r;
    for (double r : relay)
        s += r;
    return s;
}

Simulation::Simulation(SimConfig config) : cfg_(std::move(config)), rng_(cfg_.seed) {
    auto violations = validate_spec(cfg_.spec);
    if (!violations.empty())
        throw std::invalid_argument("invalid network spec: " + join(violations));

    const Topology& topo = cfg_.spec.topology;
    const Rates& rates = cfg_.spec.rates;
    const PolicyKind& pol = cfg_.spec.policy;
    const int n = topo.n;

    if (rates.lambda_e > 0.0) {
        if (cfg_.horizon_epochs < 1)
            throw std::invalid_argument("horizon_epochs must be >= 1");
        if (cfg_.warmup_epochs < 0 || cfg_.warmup_epochs >= cfg_.horizon_epochs)
            throw std::invalid_argument("warmup_epochs must be in [0, horizon_epochs)");
    } else {
        // no epochs without self-updates; fall back to a fixed time budget
        time_budget_ = 1e4 / rates.lambda_total;
    }

    st_.node_versions.assign(n, 0);
    direct_cum_.resize(n);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        acc += cfg_.spec.profile.per_node[i];
        direct_cum_[i] = acc;
    }
    direct_total_ = acc;

    switch (pol.type) {
        case PolicyType::UniformGossip: {
            for (int i = 0; i < n; ++i)
                if (topo.degree(i) > 0)
                    uniform_senders_.push_back(i);
            uniform_total_ = rates.lambda_total * static_cast<double>(uniform_senders_.size());
            GroupState g;
            g.members.resize(n);
            std::iota(g.members.begin(), g.members.end(), 0);
            g.capacity = 0.0;  // accounted through uniform_total_
            st_.groups.push_back(std::move(g));
            break;
        }
        case PolicyType::Asuman:
        case PolicyType::AsumanFrozen: {
            GroupState g;
            g.members.resize(n);
            std::iota(g.members.begin(), g.members.end(), 0);
            g.capacity = n >= 2 ? rates.gossip_capacity : 0.0;
            st_.groups.push_back(std::move(g));
            if (topo.kind == TopologyKind::Partial)
                target_count_ = std::max(1, static_cast<int>(topo.q * (n - 1)));
            if (pol.type == PolicyType::AsumanFrozen)
                st_.frozen_versions.assign(n, 0);
            break;
        }
        case PolicyType::Hierarchical: {
            const int c = topo.clusters, m = topo.cluster_size;
            for (int k = 0; k < c; ++k) {
                GroupState g;
                int base = k * (m + 1);
                g.members.resize(m);
                std::iota(g.members.begin(), g.members.end(), base);
                g.capacity = m * rates.lambda_total;
                st_.groups.push_back(std::move(g));
            }
            relay_total_ = c * pol.p_split * rates.lambda_total;
            if (pol.head_policy == HeadPolicy::FullAsuman) {
                GroupState g;
                g.members = topo.head_ids();
                g.capacity = c * (1.0 - pol.p_split) * rates.lambda_total;
                st_.groups.push_back(std::move(g));
            } else if (pol.head_policy == HeadPolicy::Ring) {
                head_ring_total_ = c * (1.0 - pol.p_split) * rates.lambda_total;
            }
            break;
        }
    }

    integral_.assign(n, 0.0);
    last_flush_.assign(n, 0.0);
    receive_counts_.assign(n, 0);
    scratch_.resize(n);
    min_age_series_.push_back(0);
    rebuild_groups_at_epoch_start();
}

void Simulation::flush_node(int i) {
    integral_[i] += static_cast<double>(st_.source_version - st_.node_versions[i]) *
                    (st_.t - last_flush_[i]);
    last_flush_[i] = st_.t;
}

void Simulation::flush_all() {
    for (int i = 0; i < cfg_.spec.topology.n; ++i)
        flush_node(i);
}

double Simulation::enabled_group_rate() const {
    double s = 0.0;
    for (const auto& g : st_.groups)
        if (g.phase == Phase::Gossiping)
            s += g.capacity;
    return s;
}

double Simulation::total_rate() const {
    return cfg_.spec.rates.lambda_e + direct_total_ + relay_total_ + enabled_group_rate() +
           uniform_total_ + head_ring_total_;
}

void Simulation::rebuild_groups_at_epoch_start() {
    const PolicyKind& pol = cfg_.spec.policy;
    const Topology& topo = cfg_.spec.topology;
    bool sensing = pol.type != PolicyType::UniformGossip;
    for (auto& g : st_.groups) {
        std::int64_t maxv = std::numeric_limits<std::int64_t>::min();
        for (std::int32_t m : g.members)
            maxv = std::max(maxv, st_.node_versions[m]);
        g.min_age = st_.source_version - maxv;
        g.active.clear();
        for (std::int32_t m : g.members)
            if (st_.node_versions[m] == maxv)
                g.active.push_back(m);
        double len = sensing ? pol.c_coeff * static_cast<double>(g.min_age) : 0.0;
        if (len > 0.0) {
            g.phase = Phase::Sensing;
            g.gossip_start = st_.t + len;
        } else {
            g.phase = Phase::Gossiping;
            g.gossip_start = st_.t;
        }
        if (pol.type == PolicyType::AsumanFrozen)
            for (std::int32_t j : g.members)
                st_.frozen_versions[j] = st_.node_versions[j];
        if (topo.kind == TopologyKind::Partial) {
            const int n = topo.n;
            g.targets.assign(g.active.size(), {});
            for (std::size_t ai = 0; ai < g.active.size(); ++ai) {
                int j = g.active[ai];
                std::iota(scratch_.begin(), scratch_.end(), 0);
                std::swap(scratch_[j], scratch_[n - 1]);
                auto& tg = g.targets[ai];
                tg.resize(target_count_);
                for (int k = 0; k < target_count_; ++k) {
                    int r = k + rng_.pick(n - 1 - k);
                    std::swap(scratch_[k], scratch_[r]);
                    tg[k] = scratch_[k];
                }
                std::sort(tg.begin(), tg.end());
            }
        }
    }
}

void Simulation::on_source_self_update() {
    std::int64_t maxv = std::numeric_limits<std::int64_t>::min();
    for (int i = 0; i < cfg_.spec.topology.n; ++i) {
        flush_node(i);
        maxv = std::max(maxv, st_.node_versions[i]);
    }
    st_.source_version += 1;
    st_.epoch += 1;
    st_.epoch_start = st_.t;
    counts_.self_updates += 1;
    if (st_.epoch == cfg_.warmup_epochs) {
        std::fill(integral_.begin(), integral_.end(), 0.0);
        window_start_ = st_.t;
    }
    EventRecord ev{st_.t, EventKind::SourceSelfUpdate, -1, -1, st_.epoch};
    if (st_.epoch == cfg_.horizon_epochs) {
        window_end_ = st_.t;
        done_ = true;
        if (observer_)
            observer_(ev);
        return;
    }
    min_age_series_.push_back(st_.source_version - maxv);
    rebuild_groups_at_epoch_start();
    if (observer_)
        observer_(ev);
}

void Simulation::on_direct_update(int i) {
    flush_node(i);
    st_.node_versions[i] = st_.source_version;
    receive_counts_[i] += 1;
    counts_.direct_updates += 1;
    if (observer_)
        observer_(EventRecord{st_.t, EventKind::DirectUpdate, -1, i, st_.epoch});
}

void Simulation::on_relay_update(int head, int leaf) {
    flush_node(leaf);
    st_.node_versions[leaf] = std::max(st_.node_versions[leaf], st_.node_versions[head]);
    receive_counts_[leaf] += 1;
    counts_.relay_updates += 1;
    if (observer_)
        observer_(EventRecord{st_.t, EventKind::RelayUpdate, head, leaf, st_.epoch});
}

void Simulation::on_gossip(int j, int l, int group) {
    std::int64_t v = cfg_.spec.policy.type == PolicyType::AsumanFrozen && group >= 0
                         ? st_.frozen_versions[j]
                         : st_.node_versions[j];
    flush_node(l);
    st_.node_versions[l] = std::max(st_.node_versions[l], v);
    receive_counts_[l] += 1;
    counts_.gossip_events += 1;
    if (observer_)
        observer_(EventRecord{st_.t, EventKind::Gossip, j, l, st_.epoch});
}

void Simulation::start_gossip_phase(int group) {
    st_.groups[group].phase = Phase::Gossiping;
    counts_.phase_starts += 1;
    if (observer_)
        observer_(EventRecord{st_.t, EventKind::GossipPhaseStart, group, -1, st_.epoch});
}

int Simulation::pick_gossip_target(int group, int j, int j_active_idx) {
    const Topology& topo = cfg_.spec.topology;
    if (cfg_.spec.policy.type == PolicyType::Hierarchical) {
        const int c = topo.clusters, m = topo.cluster_size;
        if (group < c) {  // leaf cluster: uniform over the other m-1 leaves
            int base = group * (m + 1);
            int r = rng_.pick(m - 1);
            return base + r + (r >= j - base ? 1 : 0);
        }
        int kj = topo.cluster_of[j];  // head group: uniform over the other heads
        int r = rng_.pick(c - 1);
        int k2 = r + (r >= kj ? 1 : 0);
        return k2 * (m + 1) + m;
    }
    switch (topo.kind) {
        case TopologyKind::Complete: {
            int r = rng_.pick(topo.n - 1);
            return r + (r >= j ? 1 : 0);
        }
        case TopologyKind::Partial:
            return st_.groups[group].targets[j_active_idx][rng_.pick(target_count_)];
        default: {
            const auto& adj = topo.adjacency[j];
            return adj[rng_.pick(static_cast<int>(adj.size()))];
        }
    }
}

bool Simulation::step() {
    if (done_)
        return false;

    const double le = cfg_.spec.rates.lambda_e;
    double group_rate = enabled_group_rate();
    double rates[6] = {le, direct_total_, relay_total_, group_rate, uniform_total_, head_ring_total_};
    double R = 0.0;
    for (double r : rates)
        R += r;

    double next_control = kInf;
    int control_group = -1;
    for (std::size_t g = 0; g < st_.groups.size(); ++g) {
        if (st_.groups[g].phase == Phase::Sensing && st_.groups[g].gossip_start < next_control) {
            next_control = st_.groups[g].gossip_start;
            control_group = static_cast<int>(g);
        }
    }

    double tn = st_.t + rng_.exponential(R);
    if (le == 0.0 && tn >= time_budget_) {
        finish(time_budget_);
        return false;
    }
    if (control_group >= 0 && tn >= next_control) {
        // control point preempts the sampled event; clocks redraw next step
        st_.t = next_control;
        start_gossip_phase(control_group);
        return true;
    }
    st_.t = tn;

    double x = rng_.uniform01() * R;
    int cat = 5;
    for (int i = 0; i < 6; ++i) {
        if (x < rates[i]) {
            cat = i;
            break;
        }
        x -= rates[i];
    }
    while (cat > 0 && rates[cat] == 0.0)  // floating-point overshoot guard
        --cat;

    switch (cat) {
        case 0:
            on_source_self_update();
            break;
        case 1: {
            auto it = std::upper_bound(direct_cum_.begin(), direct_cum_.end(), x);
            int i = static_cast<int>(std::min<std::ptrdiff_t>(it - direct_cum_.begin(),
                                                              cfg_.spec.topology.n - 1));
            on_direct_update(i);
            break;
        }
        case 2: {
            const Topology& topo = cfg_.spec.topology;
            double per_head = cfg_.spec.policy.p_split * cfg_.spec.rates.lambda_total;
            int k = std::min(topo.clusters - 1, static_cast<int>(x / per_head));
            int base = k * (topo.cluster_size + 1);
            on_relay_update(base + topo.cluster_size, base + rng_.pick(topo.cluster_size));
            break;
        }
        case 3: {
            int gi = -1;
            for (std::size_t g = 0; g < st_.groups.size(); ++g) {
                const auto& cand = st_.groups[g];
                if (cand.phase != Phase::Gossiping || cand.capacity == 0.0)
                    continue;
                gi = static_cast<int>(g);
                if (x < cand.capacity)
                    break;
                x -= cand.capacity;
            }
            const auto& grp = st_.groups[gi];
            int ai = rng_.pick(static_cast<int>(grp.active.size()));
            int j = grp.active[ai];
            on_gossip(j, pick_gossip_target(gi, j, ai), gi);
            break;
        }
        case 4: {
            int j = uniform_senders_[rng_.pick(static_cast<int>(uniform_senders_.size()))];
            const auto& adj = cfg_.spec.topology.adjacency[j];
            on_gossip(j, adj[rng_.pick(static_cast<int>(adj.size()))], -1);
            break;
        }
        case 5: {
            // hierarchical ring heads: uniform neighbor on the head ring
            const Topology& topo = cfg_.spec.topology;
            const int c = topo.clusters, m = topo.cluster_size;
            int k = rng_.pick(c);
            int k2 = rng_.pick(2) == 0 ? (k + c - 1) % c : (k + 1) % c;
            on_gossip(k * (m + 1) + m, k2 * (m + 1) + m, -1);
            break;
        }
    }
    return !done_;
}

void Simulation::finish(double t_end) {
    st_.t = t_end;
    flush_all();
    window_end_ = t_end;
    done_ = true;
}

RunStatistics Simulation::run() {
    while (step()) {
    }
    const int n = cfg_.spec.topology.n;
    RunStatistics out;
    out.window = window_end_ - window_start_;
    out.node_mean_age.resize(n);
    double net = 0.0;
    for (int i = 0; i < n; ++i) {
        out.node_mean_age[i] = integral_[i] / out.window;
        net += out.node_mean_age[i];
    }
    out.network_mean_age = net / n;
    out.min_age_series = min_age_series_;
    out.late_min_age_mean =
        epoch_min_age_mean(out.min_age_series, out.min_age_series.size() / 2);
    out.replication = cfg_.replication;
    out.seed = cfg_.seed;
    out.config_digest = config_digest(cfg_.spec);
    out.counts = counts_;
    return out;
}

RateTable Simulation::event_rates() const {
    const Topology& topo = cfg_.spec.topology;
    RateTable rt;
    rt.source_self = cfg_.spec.rates.lambda_e;
    rt.direct = cfg_.spec.profile.per_node;
    if (cfg_.spec.policy.type == PolicyType::Hierarchical) {
        rt.relay.assign(topo.n, 0.0);
        double per_leaf = cfg_.spec.policy.p_split * cfg_.spec.rates.lambda_total / topo.cluster_size;
        for (int i = 0; i < topo.n; ++i)
            if (!topo.is_head[i])
                rt.relay[i] = per_leaf;
    }
    rt.gossip_total = enabled_group_rate() + uniform_total_ + head_ring_total_;
    return rt;
}

double Simulation::pair_gossip_rate(int j, int l) const {
    const Topology& topo = cfg_.spec.topology;
    if (j < 0 || j >= topo.n || l < 0 || l >= topo.n)
        throw std::invalid_argument("pair_gossip_rate: node out of range");
    if (j == l)
        return 0.0;
    const PolicyKind& pol = cfg_.spec.policy;
    auto adjacent = [&](int a, int b) {
        const auto& adj = topo.adjacency[a];
        return std::binary_search(adj.begin(), adj.end(), b);
    };
    switch (pol.type) {
        case PolicyType::UniformGossip:
            return adjacent(j, l) ? cfg_.spec.rates.lambda_total / topo.degree(j) : 0.0;
        case PolicyType::Asuman:
        case PolicyType::AsumanFrozen: {
            const GroupState& g = st_.groups[0];
            if (g.phase != Phase::Gossiping || g.capacity == 0.0)
                return 0.0;
            auto it = std::lower_bound(g.active.begin(), g.active.end(), j);
            if (it == g.active.end() || *it != j)
                return 0.0;
            double share = g.capacity / static_cast<double>(g.active.size());
            switch (topo.kind) {
                case TopologyKind::Complete:
                    return share / (topo.n - 1);
                case TopologyKind::Partial: {
                    const auto& tg = g.targets[it - g.active.begin()];
                    return std::binary_search(tg.begin(), tg.end(), l)
                               ? share / static_cast<double>(target_count_)
                               : 0.0;
                }
                default:
                    return adjacent(j, l) ? share / topo.degree(j) : 0.0;
            }
        }
        case PolicyType::Hierarchical: {
            const int c = topo.clusters, m = topo.cluster_size;
            if (!topo.is_head[j]) {
                if (topo.is_head[l] || topo.cluster_of[j] != topo.cluster_of[l])
                    return 0.0;
                const GroupState& g = st_.groups[topo.cluster_of[j]];
                if (g.phase != Phase::Gossiping)
                    return 0.0;
                if (!std::binary_search(g.active.begin(), g.active.end(), j))
                    return 0.0;
                return g.capacity / static_cast<double>(g.active.size()) / (m - 1);
            }
            if (!topo.is_head[l])
                return 0.0;
            if (pol.head_policy == HeadPolicy::FullAsuman) {
                const GroupState& g = st_.groups[c];
                if (g.phase != Phase::Gossiping)
                    return 0.0;
                if (!std::binary_search(g.active.begin(), g.active.end(), j))
                    return 0.0;
                return g.capacity / static_cast<double>(g.active.size()) / (c - 1);
            }
            if (pol.head_policy == HeadPolicy::Ring) {
                int kj = topo.cluster_of[j], kl = topo.cluster_of[l];
                bool neighbor = (kj + 1) % c == kl || (kl + 1) % c == kj;
                return neighbor ? (1.0 - pol.p_split) * cfg_.spec.rates.lambda_total / 2.0 : 0.0;
            }
            return 0.0;
        }
    }
    return 0.0;
}

void Simulation::set_observer(std::function<void(const EventRecord&)> observer) {
    observer_ = std::move(observer);
}

RunStatistics simulate(const SimConfig& config) {
    Simulation sim(config);
    return sim.run();
}

} // namespace asuman
