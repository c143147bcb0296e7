#include "asuman/network.hpp"

#include <cmath>
#include <cstring>

namespace asuman {

namespace {

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }

void fnv_add(std::uint64_t& h, const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

template <typename T>
void fnv_add_value(std::uint64_t& h, T v) {
    fnv_add(h, &v, sizeof v);
}

} // namespace

std::vector<std::string> validate_spec(const NetworkSpec& spec) {
    std::vector<std::string> v;
    const Topology& topo = spec.topology;
    const Rates& rates = spec.rates;
    const PolicyKind& pol = spec.policy;

    if (topo.n < 1 || topo.adjacency.size() != static_cast<std::size_t>(topo.n))
        v.push_back("topology: node count and adjacency size disagree");
    if (!finite_nonneg(rates.lambda_e))
        v.push_back("rates: lambda_e must be finite and >= 0");
    if (!std::isfinite(rates.lambda_total) || rates.lambda_total <= 0.0)
        v.push_back("rates: lambda_total must be finite and > 0");
    if (!finite_nonneg(rates.gossip_capacity))
        v.push_back("rates: gossip_capacity must be finite and >= 0");
    if (!std::isfinite(pol.c_coeff) || pol.c_coeff < 0.0)
        v.push_back("policy: c_coeff must be finite and >= 0");
    if (!std::isfinite(pol.p_split) || pol.p_split < 0.0 || pol.p_split > 1.0)
        v.push_back("policy: p_split must be in [0, 1]");

    if (spec.profile.per_node.size() != static_cast<std::size_t>(topo.n)) {
        v.push_back("profile: size does not match node count");
    } else {
        bool neg = false;
        for (double r : spec.profile.per_node)
            if (!finite_nonneg(r))
                neg = true;
        if (neg)
            v.push_back("profile: per-node rates must be finite and >= 0");
        double s = spec.profile.sum();
        if (std::fabs(s - rates.lambda_total) > 1e-9 * std::max(1.0, rates.lambda_total))
            v.push_back("profile: per-node rates do not sum to lambda_total");
    }

    bool clustered = topo.kind == TopologyKind::Clustered;
    bool hierarchical = pol.type == PolicyType::Hierarchical;
    if (clustered != hierarchical)
        v.push_back("policy/topology: clustered topologies pair only with the hierarchical policy");

    if (topo.kind == TopologyKind::Partial) {
        if (pol.type != PolicyType::Asuman && pol.type != PolicyType::AsumanFrozen)
            v.push_back("policy/topology: partial connectivity needs asuman or asuman_frozen");
        if (!(topo.q > 0.0) || topo.q > 1.0)
            v.push_back("topology: q must be in (0, 1]");
        else if (static_cast<int>(topo.q * (topo.n - 1)) < 1)
            v.push_back("topology: floor(q*(n-1)) is 0, no gossip targets");
    }

    if (clustered && hierarchical) {
        bool match = (pol.head_policy == HeadPolicy::Disconnected && topo.head_links == HeadLinks::None) ||
                     (pol.head_policy == HeadPolicy::Ring && topo.head_links == HeadLinks::Ring) ||
                     (pol.head_policy == HeadPolicy::FullAsuman && topo.head_links == HeadLinks::Complete);
        if (!match)
            v.push_back("policy/topology: head_policy does not match topology head_links");
        if (pol.head_policy == HeadPolicy::Disconnected && pol.p_split != 1.0)
            v.push_back("policy: disconnected heads require p_split == 1");
        if (pol.head_policy == HeadPolicy::FullAsuman && topo.clusters < 2)
            v.push_back("policy: full head gossip needs at least 2 clusters");
        if (!spec.profile.per_node.empty() && spec.profile.per_node.size() == static_cast<std::size_t>(topo.n)) {
            for (int i = 0; i < topo.n; ++i) {
                bool head = !topo.is_head.empty() && topo.is_head[i];
                if (!head && spec.profile.per_node[i] != 0.0) {
                    v.push_back("profile: leaves must not receive direct source updates");
                    break;
                }
            }
        }
    }

    return v;
}

std::uint64_t config_digest(const NetworkSpec& spec) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv_add_value(h, static_cast<int>(spec.topology.kind));
    fnv_add_value(h, spec.topology.n);
    fnv_add_value(h, spec.topology.q);
    fnv_add_value(h, spec.topology.rows);
    fnv_add_value(h, spec.topology.cols);
    fnv_add_value(h, spec.topology.wrap ? 1 : 0);
    fnv_add_value(h, spec.topology.clusters);
    fnv_add_value(h, spec.topology.cluster_size);
    fnv_add_value(h, static_cast<int>(spec.topology.head_links));
    fnv_add_value(h, spec.rates.lambda_e);
    fnv_add_value(h, spec.rates.lambda_total);
    fnv_add_value(h, spec.rates.gossip_capacity);
    fnv_add_value(h, static_cast<int>(spec.policy.type));
    fnv_add_value(h, spec.policy.c_coeff);
    fnv_add_value(h, spec.policy.p_split);
    fnv_add_value(h, static_cast<int>(spec.policy.head_policy));
    for (double r : spec.profile.per_node)
        fnv_add_value(h, r);
    return h;
}

} // namespace asuman
