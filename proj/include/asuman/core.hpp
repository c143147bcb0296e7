#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace asuman {

// Poisson rate triple for one scenario.  lambda_total is the aggregate
// source-to-network rate; how it splits across nodes lives in RateProfile.
struct Rates {
    double lambda_e = 1.0;         // source self-update rate
    double lambda_total = 1.0;     // total source-to-node update rate
    double gossip_capacity = 0.0;  // total gossip rate B shared by active nodes
};

// Per-node source update rates; entries sum to Rates::lambda_total.
struct RateProfile {
    std::vector<double> per_node;

    double sum() const;
};

enum class PolicyType {
    UniformGossip,  // every node gossips blindly at rate lambda_total/n split over neighbors
    Asuman,         // sense-then-gossip; only current minimum-age nodes transmit
    AsumanFrozen,   // as Asuman, but transmitters send the version snapshot taken at T_k
    Hierarchical,   // clustered: leaves run cluster-local Asuman, heads per head_policy
};

enum class HeadPolicy {
    Disconnected,  // heads never gossip among themselves (requires p_split == 1)
    Ring,          // heads run uniform ring gossip at (1-p) * lambda_total each
    FullAsuman,    // heads run Asuman over the complete head graph, capacity c(1-p) * lambda_total
};

struct PolicyKind {
    PolicyType type = PolicyType::Asuman;
    double c_coeff = 0.0;   // sensing back-off constant C; phase length is C * min-age
    double p_split = 0.5;   // hierarchical: fraction of head rate reserved for its leaves
    HeadPolicy head_policy = HeadPolicy::FullAsuman;

    static PolicyKind uniform();
    static PolicyKind asuman(double c);
    static PolicyKind asuman_frozen(double c);
    static PolicyKind hierarchical(double p, HeadPolicy hp, double c);
};

const char* policy_name(const PolicyKind& policy);

// Version bookkeeping.  Ages are not stored; they are always derived as
// source_version - node_versions[i], which keeps the defining identity true
// by construction and makes every age update a 64-bit integer assignment.
struct AgeVector {
    std::int64_t source_version = 0;
    std::vector<std::int64_t> node_versions;

    std::int64_t age(int i) const { return source_version - node_versions[i]; }
    std::vector<std::int64_t> ages() const;
};

struct MinAgeSet {
    std::vector<std::int32_t> indices;  // ascending
    std::int64_t min_age = 0;
};

// Minimum-age nodes among `subset` given per-node ages.  Throws
// std::invalid_argument on an empty subset or out-of-range index.
MinAgeSet min_age_set(std::span<const std::int64_t> ages, std::span<const std::int32_t> subset);
MinAgeSet min_age_set(const AgeVector& av, std::span<const std::int32_t> subset);

} // namespace asuman
