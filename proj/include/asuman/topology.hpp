#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asuman/core.hpp"

namespace asuman {

enum class TopologyKind { Complete, Partial, Ring, Grid, Clustered };

enum class HeadLinks { None, Ring, Complete };

// Static connectivity.  For Partial the adjacency is the complete graph and q
// is carried as a parameter; each active node draws floor(q*(n-1)) targets per
// epoch at runtime.  For Clustered there are c blocks of m leaves plus one
// head; the head is the last index of its block.
struct Topology {
    TopologyKind kind = TopologyKind::Complete;
    int n = 0;  // total node count (c*(m+1) for Clustered)
    double q = 1.0;
    int rows = 0, cols = 0;
    bool wrap = true;
    int clusters = 0;      // c
    int cluster_size = 0;  // m leaves per cluster
    HeadLinks head_links = HeadLinks::None;
    std::vector<std::vector<std::int32_t>> adjacency;
    std::vector<std::int32_t> cluster_of;  // Clustered only
    std::vector<bool> is_head;             // Clustered only

    int degree(int i) const { return static_cast<int>(adjacency[i].size()); }
    bool head(int i) const { return !is_head.empty() && is_head[i]; }
    std::vector<std::int32_t> leaf_ids() const;
    std::vector<std::int32_t> head_ids() const;
};

Topology build_complete(int n);
Topology build_partial(int n, double q);
Topology build_ring(int n);
Topology build_grid(int rows, int cols, bool wrap = true);
Topology build_clustered(int c, int m, HeadLinks head_links);

const char* topology_name(TopologyKind kind);

// One line per node: "i: j k l" with neighbor ids ascending.
std::string adjacency_text(const Topology& topo);

RateProfile rate_profile_uniform(double lambda_total, int n);
// lambda_i = lambda * nu^i (1-nu) / (nu (1-nu^n)), i = 1..n mapped to ids 0..n-1
RateProfile rate_profile_power_law(double lambda_total, double nu, int n);
// Clustered: heads receive lambda_total/c each, leaves nothing.
RateProfile rate_profile_cluster_heads(double lambda_total, const Topology& topo);

} // namespace asuman
