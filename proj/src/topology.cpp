#include "asuman/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asuman {

std::vector<std::int32_t> Topology::leaf_ids() const {
    std::vector<std::int32_t> out;
    for (int i = 0; i < n; ++i)
        if (is_head.empty() || !is_head[i])
            out.push_back(i);
    return out;
}

std::vector<std::int32_t> Topology::head_ids() const {
    std::vector<std::int32_t> out;
    for (int i = 0; i < n; ++i)
        if (!is_head.empty() && is_head[i])
            out.push_back(i);
    return out;
}

Topology build_complete(int n) {
    if (n < 1)
        throw std::invalid_argument("build_complete: n must be >= 1");
    Topology t;
    t.kind = TopologyKind::Complete;
    t.n = n;
    t.adjacency.resize(n);
    for (int i = 0; i < n; ++i) {
        t.adjacency[i].reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != i)
                t.adjacency[i].push_back(j);
    }
    return t;
}

Topology build_partial(int n, double q) {
    if (n < 2)
        throw std::invalid_argument("build_partial: n must be >= 2");
    if (!(q > 0.0) || q > 1.0)
        throw std::invalid_argument("build_partial: q must be in (0, 1]");
    Topology t = build_complete(n);
    t.kind = TopologyKind::Partial;
    t.q = q;
    return t;
}

Topology build_ring(int n) {
    if (n < 3)
        throw std::invalid_argument("build_ring: n must be >= 3");
    Topology t;
    t.kind = TopologyKind::Ring;
    t.n = n;
    t.adjacency.resize(n);
    for (int i = 0; i < n; ++i) {
        int left = (i + n - 1) % n;
        int right = (i + 1) % n;
        t.adjacency[i] = {std::min(left, right), std::max(left, right)};
    }
    return t;
}

Topology build_grid(int rows, int cols, bool wrap) {
    if (wrap && (rows < 3 || cols < 3))
        throw std::invalid_argument("build_grid: wrapped grid needs rows, cols >= 3");
    if (!wrap && (rows < 1 || cols < 1 || rows * cols < 2))
        throw std::invalid_argument("build_grid: grid too small");
    Topology t;
    t.kind = TopologyKind::Grid;
    t.n = rows * cols;
    t.rows = rows;
    t.cols = cols;
    t.wrap = wrap;
    t.adjacency.resize(t.n);
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            auto& adj = t.adjacency[id(r, c)];
            if (wrap) {
                adj.push_back(id((r + rows - 1) % rows, c));
                adj.push_back(id((r + 1) % rows, c));
                adj.push_back(id(r, (c + cols - 1) % cols));
                adj.push_back(id(r, (c + 1) % cols));
            } else {
                if (r > 0) adj.push_back(id(r - 1, c));
                if (r + 1 < rows) adj.push_back(id(r + 1, c));
                if (c > 0) adj.push_back(id(r, c - 1));
                if (c + 1 < cols) adj.push_back(id(r, c + 1));
            }
            std::sort(adj.begin(), adj.end());
        }
    }
    return t;
}

Topology build_clustered(int c, int m, HeadLinks head_links) {
    if (c < 1)
        throw std::invalid_argument("build_clustered: c must be >= 1");
    if (m < 2)
        throw std::invalid_argument("build_clustered: m must be >= 2");
    if (head_links == HeadLinks::Ring && c < 3)
        throw std::invalid_argument("build_clustered: ring head links need c >= 3");
    Topology t;
    t.kind = TopologyKind::Clustered;
    t.clusters = c;
    t.cluster_size = m;
    t.head_links = head_links;
    t.n = c * (m + 1);
    t.adjacency.resize(t.n);
    t.cluster_of.resize(t.n);
    t.is_head.assign(t.n, false);
    for (int k = 0; k < c; ++k) {
        int base = k * (m + 1);
        int head = base + m;
        t.is_head[head] = true;
        for (int i = base; i <= head; ++i)
            t.cluster_of[i] = k;
        // leaves: complete graph inside the cluster plus the head link
        for (int i = base; i < head; ++i) {
            for (int j = base; j < head; ++j)
                if (j != i)
                    t.adjacency[i].push_back(j);
            t.adjacency[i].push_back(head);
        }
        for (int i = base; i < head; ++i)
            t.adjacency[head].push_back(i);
    }
    auto head_id = [m](int k) { return k * (m + 1) + m; };
    if (head_links == HeadLinks::Ring) {
        for (int k = 0; k < c; ++k) {
            t.adjacency[head_id(k)].push_back(head_id((k + c - 1) % c));
            t.adjacency[head_id(k)].push_back(head_id((k + 1) % c));
        }
    } else if (head_links == HeadLinks::Complete) {
        for (int k = 0; k < c; ++k)
            for (int j = 0; j < c; ++j)
                if (j != k)
                    t.adjacency[head_id(k)].push_back(head_id(j));
    }
    for (auto& adj : t.adjacency)
        std::sort(adj.begin(), adj.end());
    return t;
}

const char* topology_name(TopologyKind kind) {
    switch (kind) {
        case TopologyKind::Complete: return "complete";
        case TopologyKind::Partial: return "partial";
        case TopologyKind::Ring: return "ring";
        case TopologyKind::Grid: return "grid";
        case TopologyKind::Clustered: return "clustered";
    }
    return "unknown";
}

std::string adjacency_text(const Topology& topo) {
    std::string out;
    for (int i = 0; i < topo.n; ++i) {
        out += std::to_string(i);
        out += ':';
        for (std::int32_t j : topo.adjacency[i]) {
            out += ' ';
            out += std::to_string(j);
        }
        out += '\n';
    }
    return out;
}

RateProfile rate_profile_uniform(double lambda_total, int n) {
    if (n < 1 || !(lambda_total > 0.0))
        throw std::invalid_argument("rate_profile_uniform: need n >= 1 and lambda > 0");
    RateProfile p;
    p.per_node.assign(n, lambda_total / n);
    return p;
}

RateProfile rate_profile_power_law(double lambda_total, double nu, int n) {
    if (n < 1 || !(lambda_total > 0.0))
        throw std::invalid_argument("rate_profile_power_law: need n >= 1 and lambda > 0");
    if (!(nu > 0.0) || !(nu < 1.0))
        throw std::invalid_argument("rate_profile_power_law: nu must be in (0, 1)");
    RateProfile p;
    p.per_node.resize(n);
    // normalizer: sum_{i=1..n} nu^i = nu (1-nu^n) / (1-nu)
    double norm = nu * (1.0 - std::pow(nu, n)) / (1.0 - nu);
    for (int i = 1; i <= n; ++i)
        p.per_node[i - 1] = lambda_total * std::pow(nu, i) / norm;
    return p;
}

RateProfile rate_profile_cluster_heads(double lambda_total, const Topology& topo) {
    if (topo.kind != TopologyKind::Clustered)
        throw std::invalid_argument("rate_profile_cluster_heads: topology is not clustered");
    RateProfile p;
    p.per_node.assign(topo.n, 0.0);
    double per_head = lambda_total / topo.clusters;
    for (int i = 0; i < topo.n; ++i)
        if (topo.is_head[i])
            p.per_node[i] = per_head;
    return p;
}

} // namespace asuman
