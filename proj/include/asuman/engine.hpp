#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "asuman/metrics.hpp"
#include "asuman/network.hpp"
#include "asuman/rng.hpp"

namespace asuman {

struct SimConfig {
    NetworkSpec spec;
    std::int64_t horizon_epochs = 0;  // source self-updates to simulate
    std::int64_t warmup_epochs = 0;   // discarded before measurement starts
    std::uint64_t seed = 1;
    std::int32_t replication = 0;
};

enum class Phase { Sensing, Gossiping };

// One sensing scope: the whole network for flat policies; one per cluster
// plus one for the heads under the hierarchical policy.
struct GroupState {
    std::vector<std::int32_t> members;
    std::vector<std::int32_t> active;  // minimum-age members, fixed at T_k, ascending
    Phase phase = Phase::Gossiping;
    double gossip_start = 0.0;  // control point; meaningful while sensing
    std::int64_t min_age = 0;   // group minimum age at T_k
    double capacity = 0.0;      // total gossip rate while the group is gossiping
    std::vector<std::vector<std::int32_t>> targets;  // per active node, Partial only
};

struct SimState {
    double t = 0.0;
    std::int64_t source_version = 0;
    std::vector<std::int64_t> node_versions;
    std::int64_t epoch = 0;
    double epoch_start = 0.0;
    std::vector<GroupState> groups;
    std::vector<std::int64_t> frozen_versions;  // AsumanFrozen: per-node snapshot at T_k

    std::int64_t age(int i) const { return source_version - node_versions[i]; }
    std::vector<std::int64_t> ages() const;
};

enum class EventKind { SourceSelfUpdate, DirectUpdate, RelayUpdate, Gossip, GossipPhaseStart };

// src is -1 when the source acts (self and direct updates); for phase starts
// src holds the group index.  epoch is the index after the event applies, so
// a self-update carries the epoch it opens.
struct EventRecord {
    double t = 0.0;
    EventKind kind = EventKind::SourceSelfUpdate;
    std::int32_t src = -1;
    std::int32_t dst = -1;
    std::int64_t epoch = 0;
};

const char* event_kind_name(EventKind kind);
std::string trace_line(const EventRecord& ev);  // "t kind src dst k"

struct RateTable {
    double source_self = 0.0;
    std::vector<double> direct;  // source -> i
    std::vector<double> relay;   // head -> leaf; empty unless hierarchical
    double gossip_total = 0.0;   // every enabled gossip link combined

    double total() const;
};

// Continuous-time event-driven run over competing exponential clocks.  The
// next event is drawn from the aggregate rate and classified by a single
// uniform; deterministic gossip-phase control points preempt sampled events,
// after which all clocks are redrawn (memoryless).  Age integrals are exact:
// each node's piecewise-constant age is flushed whenever its version or the
// source version changes.
class Simulation {
public:
    // throws std::invalid_argument when validate_spec fails or the horizon
    // and warmup are inconsistent
    explicit Simulation(SimConfig config);

    // advance by one event; false once the horizon has been reached
    bool step();
    // run to completion and summarize
    RunStatistics run();

    bool done() const { return done_; }
    const SimConfig& config() const { return cfg_; }
    const SimState& state() const { return st_; }

    // instantaneous rate table for the current state
    RateTable event_rates() const;
    // instantaneous rate of the gossip link j -> l (0 when disabled)
    double pair_gossip_rate(int j, int l) const;

    // called after each event is applied; state() reflects the post-state
    void set_observer(std::function<void(const EventRecord&)> observer);

private:
    void on_source_self_update();
    void on_direct_update(int i);
    void on_relay_update(int head, int leaf);
    void on_gossip(int j, int l, int group);
    void start_gossip_phase(int group);
    void rebuild_groups_at_epoch_start();
    void flush_node(int i);
    void flush_all();
    void finish(double t_end);
    int pick_gossip_target(int group, int j, int j_active_idx);
    double enabled_group_rate() const;
    double total_rate() const;

    SimConfig cfg_;
    Rng rng_;
    SimState st_;

    // static per-run tables
    std::vector<double> direct_cum_;  // prefix sums of the rate profile
    double direct_total_ = 0.0;
    double relay_total_ = 0.0;      // hierarchical: p*lambda per head
    double uniform_total_ = 0.0;    // uniform gossip policy
    double head_ring_total_ = 0.0;  // hierarchical ring heads
    std::vector<std::int32_t> uniform_senders_;  // nodes with degree > 0
    int target_count_ = 0;                       // Partial: floor(q*(n-1))
    double time_budget_ = 0.0;                   // lambda_e == 0 mode

    // measurement
    std::vector<double> integral_;
    std::vector<double> last_flush_;
    std::vector<std::int64_t> receive_counts_;
    std::vector<std::int64_t> min_age_series_;
    double window_start_ = 0.0;
    double window_end_ = 0.0;
    EventCounts counts_;
    bool done_ = false;

    std::vector<std::int32_t> scratch_;  // Partial target sampling
    std::function<void(const EventRecord&)> observer_;
};

RunStatistics simulate(const SimConfig& config);

} // namespace asuman
