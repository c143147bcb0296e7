#include <doctest.h>

#include <set>
#include <stdexcept>
#include <string>

#include "asuman/topology.hpp"

using namespace asuman;

namespace {

// undirected consistency: j in adj[i] iff i in adj[j], no self loops, sorted
void check_symmetric(const Topology& t) {
    for (int i = 0; i < t.n; ++i) {
        const auto& adj = t.adjacency[i];
        CHECK(std::is_sorted(adj.begin(), adj.end()));
        for (std::int32_t j : adj) {
            CHECK(j != i);
            const auto& back = t.adjacency[j];
            CHECK(std::binary_search(back.begin(), back.end(), i));
        }
    }
}

int edge_count(const Topology& t) {
    int deg = 0;
    for (int i = 0; i < t.n; ++i)
        deg += t.degree(i);
    return deg / 2;
}

} // namespace

TEST_CASE("complete graph") {
    Topology t = build_complete(5);
    CHECK(t.kind == TopologyKind::Complete);
    CHECK(t.n == 5);
    for (int i = 0; i < 5; ++i)
        CHECK(t.degree(i) == 4);
    CHECK(t.adjacency[0] == std::vector<std::int32_t>{1, 2, 3, 4});
    CHECK(t.adjacency[2] == std::vector<std::int32_t>{0, 1, 3, 4});
    check_symmetric(t);
    CHECK_FALSE(t.head(0));
    CHECK(t.leaf_ids().size() == 5);  // no heads: every node is a leaf
    CHECK(t.head_ids().empty());

    CHECK(build_complete(1).degree(0) == 0);
    CHECK_THROWS_AS(build_complete(0), std::invalid_argument);
}

TEST_CASE("partial keeps the complete adjacency and carries q") {
    Topology t = build_partial(10, 0.5);
    CHECK(t.kind == TopologyKind::Partial);
    CHECK(t.q == 0.5);
    for (int i = 0; i < 10; ++i)
        CHECK(t.degree(i) == 9);
    CHECK_THROWS_AS(build_partial(1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_partial(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_partial(10, 1.5), std::invalid_argument);
}

TEST_CASE("ring") {
    Topology t = build_ring(6);
    CHECK(t.n == 6);
    for (int i = 0; i < 6; ++i)
        CHECK(t.degree(i) == 2);
    CHECK(t.adjacency[0] == std::vector<std::int32_t>{1, 5});
    CHECK(t.adjacency[3] == std::vector<std::int32_t>{2, 4});
    check_symmetric(t);
    CHECK(edge_count(t) == 6);
    CHECK_THROWS_AS(build_ring(2), std::invalid_argument);
}

TEST_CASE("grid with wraparound") {
    Topology t = build_grid(4, 5, true);
    CHECK(t.n == 20);
    CHECK(t.rows == 4);
    CHECK(t.cols == 5);
    for (int i = 0; i < t.n; ++i)
        CHECK(t.degree(i) == 4);
    CHECK(edge_count(t) == 40);
    // row-major ids; corner (0,0) wraps to row 3 and column 4
    CHECK(t.adjacency[0] == std::vector<std::int32_t>{1, 4, 5, 15});
    check_symmetric(t);
    CHECK_THROWS_AS(build_grid(2, 5, true), std::invalid_argument);
}

TEST_CASE("open grid") {
    Topology t = build_grid(2, 3, false);
    CHECK(t.n == 6);
    CHECK(edge_count(t) == 7);
    CHECK(t.degree(0) == 2);                               // corner
    CHECK(t.degree(1) == 3);                               // edge middle
    CHECK(t.adjacency[0] == std::vector<std::int32_t>{1, 3});
    CHECK(t.adjacency[4] == std::vector<std::int32_t>{1, 3, 5});
    check_symmetric(t);
    CHECK_THROWS_AS(build_grid(1, 1, false), std::invalid_argument);
}

TEST_CASE("clustered topology layout") {
    Topology t = build_clustered(3, 4, HeadLinks::Ring);
    CHECK(t.n == 15);
    CHECK(t.clusters == 3);
    CHECK(t.cluster_size == 4);
    CHECK(t.head_ids() == std::vector<std::int32_t>{4, 9, 14});
    CHECK(t.leaf_ids().size() == 12);
    for (int i = 0; i < 5; ++i)
        CHECK(t.cluster_of[i] == 0);
    CHECK(t.cluster_of[7] == 1);
    CHECK(t.head(4));
    CHECK_FALSE(t.head(3));

    // leaves link to the m-1 other leaves plus their head
    CHECK(t.degree(0) == 4);
    CHECK(t.adjacency[0] == std::vector<std::int32_t>{1, 2, 3, 4});
    // ring heads: m leaves plus two head neighbors
    CHECK(t.degree(4) == 6);
    CHECK(t.adjacency[4] == std::vector<std::int32_t>{0, 1, 2, 3, 9, 14});
    check_symmetric(t);

    SUBCASE("complete head links") {
        Topology f = build_clustered(4, 2, HeadLinks::Complete);
        CHECK(f.degree(2) == 5);  // 2 leaves + 3 other heads
        check_symmetric(f);
    }
    SUBCASE("disconnected heads") {
        Topology d = build_clustered(2, 3, HeadLinks::None);
        CHECK(d.degree(3) == 3);  // leaves only
        check_symmetric(d);
    }
    CHECK_THROWS_AS(build_clustered(2, 4, HeadLinks::Ring), std::invalid_argument);
    CHECK_THROWS_AS(build_clustered(0, 4, HeadLinks::None), std::invalid_argument);
    CHECK_THROWS_AS(build_clustered(3, 1, HeadLinks::None), std::invalid_argument);
}

TEST_CASE("adjacency text") {
    CHECK(adjacency_text(build_ring(4)) == "0: 1 3\n1: 0 2\n2: 1 3\n3: 0 2\n");
    CHECK(adjacency_text(build_complete(1)) == "0:\n");
}

TEST_CASE("topology names") {
    CHECK(std::string(topology_name(TopologyKind::Complete)) == "complete");
    CHECK(std::string(topology_name(TopologyKind::Grid)) == "grid");
    CHECK(std::string(topology_name(TopologyKind::Clustered)) == "clustered");
}

TEST_CASE("uniform rate profile") {
    RateProfile p = rate_profile_uniform(2.0, 4);
    CHECK(p.per_node == std::vector<double>{0.5, 0.5, 0.5, 0.5});
    CHECK(p.sum() == doctest::Approx(2.0));
    CHECK_THROWS_AS(rate_profile_uniform(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(rate_profile_uniform(1.0, 0), std::invalid_argument);
}

TEST_CASE("power law rate profile") {
    // n = 2, nu = 1/2: shares nu^i / (nu + nu^2) give exactly 2/3 and 1/3
    RateProfile p = rate_profile_power_law(1.0, 0.5, 2);
    CHECK(p.per_node[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(p.per_node[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    RateProfile big = rate_profile_power_law(3.0, 0.9, 50);
    CHECK(big.sum() == doctest::Approx(3.0).epsilon(1e-9));
    for (int i = 1; i < 50; ++i)
        CHECK(big.per_node[i] < big.per_node[i - 1]);  // strictly decaying in the node index

    CHECK_THROWS_AS(rate_profile_power_law(1.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(rate_profile_power_law(1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("cluster head rate profile") {
    Topology t = build_clustered(3, 4, HeadLinks::Complete);
    RateProfile p = rate_profile_cluster_heads(3.0, t);
    CHECK(p.sum() == doctest::Approx(3.0));
    for (int i = 0; i < t.n; ++i) {
        if (t.head(i))
            CHECK(p.per_node[i] == doctest::Approx(1.0));
        else
            CHECK(p.per_node[i] == 0.0);
    }
    CHECK_THROWS_AS(rate_profile_cluster_heads(1.0, build_ring(5)), std::invalid_argument);
}
