#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "asuman/core.hpp"

using namespace asuman;

TEST_CASE("policy factories fill the right fields") {
    PolicyKind u = PolicyKind::uniform();
    CHECK(u.type == PolicyType::UniformGossip);
    CHECK(u.c_coeff == 0.0);

    PolicyKind a = PolicyKind::asuman(0.25);
    CHECK(a.type == PolicyType::Asuman);
    CHECK(a.c_coeff == 0.25);

    PolicyKind f = PolicyKind::asuman_frozen(0.1);
    CHECK(f.type == PolicyType::AsumanFrozen);
    CHECK(f.c_coeff == 0.1);

    PolicyKind h = PolicyKind::hierarchical(0.3, HeadPolicy::Ring, 0.05);
    CHECK(h.type == PolicyType::Hierarchical);
    CHECK(h.p_split == 0.3);
    CHECK(h.head_policy == HeadPolicy::Ring);
    CHECK(h.c_coeff == 0.05);
}

TEST_CASE("policy names") {
    CHECK(std::string(policy_name(PolicyKind::uniform())) == "uniform");
    CHECK(std::string(policy_name(PolicyKind::asuman(0.1))) == "asuman");
    CHECK(std::string(policy_name(PolicyKind::asuman_frozen(0.1))) == "asuman_frozen");
    CHECK(std::string(policy_name(PolicyKind::hierarchical(1.0, HeadPolicy::Disconnected, 0.1))) ==
          "hier_disconnected");
    CHECK(std::string(policy_name(PolicyKind::hierarchical(0.5, HeadPolicy::Ring, 0.1))) == "hier_ring");
    CHECK(std::string(policy_name(PolicyKind::hierarchical(0.5, HeadPolicy::FullAsuman, 0.1))) ==
          "hier_full");
}

TEST_CASE("rate profile sums") {
    RateProfile p;
    p.per_node = {0.25, 0.5, 0.25};
    CHECK(p.sum() == doctest::Approx(1.0));
    CHECK(RateProfile{}.sum() == 0.0);
}

TEST_CASE("age vector derives ages from versions") {
    AgeVector av;
    av.source_version = 7;
    av.node_versions = {7, 5, 0};
    CHECK(av.age(0) == 0);
    CHECK(av.age(1) == 2);
    CHECK(av.age(2) == 7);
    CHECK(av.ages() == std::vector<std::int64_t>{0, 2, 7});

    // the defining identity holds after any version assignment
    av.node_versions[2] = av.source_version;
    CHECK(av.age(2) == 0);
    av.source_version += 3;
    CHECK(av.age(0) == 3);
    CHECK(av.age(2) == 3);
}

TEST_CASE("min_age_set picks every tied minimum") {
    std::vector<std::int64_t> ages = {3, 1, 1, 2};
    std::vector<std::int32_t> all = {0, 1, 2, 3};

    SUBCASE("over the full node set") {
        MinAgeSet s = min_age_set(ages, all);
        CHECK(s.min_age == 1);
        CHECK(s.indices == std::vector<std::int32_t>{1, 2});
    }
    SUBCASE("restricted to a subset") {
        std::vector<std::int32_t> subset = {0, 3};
        MinAgeSet s = min_age_set(ages, subset);
        CHECK(s.min_age == 2);
        CHECK(s.indices == std::vector<std::int32_t>{3});
    }
    SUBCASE("indices come back ascending even for unordered subsets") {
        std::vector<std::int32_t> subset = {2, 1, 3};
        MinAgeSet s = min_age_set(ages, subset);
        CHECK(s.indices == std::vector<std::int32_t>{1, 2});
    }
    SUBCASE("AgeVector overload agrees") {
        AgeVector av;
        av.source_version = 4;
        av.node_versions = {1, 3, 3, 2};  // same ages as above
        MinAgeSet s = min_age_set(av, all);
        CHECK(s.min_age == 1);
        CHECK(s.indices == std::vector<std::int32_t>{1, 2});
    }
    SUBCASE("negative ages are legal inputs") {
        std::vector<std::int64_t> neg = {0, -2, 5};
        std::vector<std::int32_t> subset = {0, 1, 2};
        MinAgeSet s = min_age_set(neg, subset);
        CHECK(s.min_age == -2);
        CHECK(s.indices == std::vector<std::int32_t>{1});
    }
}

TEST_CASE("min_age_set rejects bad subsets") {
    std::vector<std::int64_t> ages = {0, 1};
    std::vector<std::int32_t> empty;
    CHECK_THROWS_AS(min_age_set(ages, empty), std::invalid_argument);
    std::vector<std::int32_t> oob = {0, 2};
    CHECK_THROWS_AS(min_age_set(ages, oob), std::invalid_argument);
    std::vector<std::int32_t> neg = {-1};
    CHECK_THROWS_AS(min_age_set(ages, neg), std::invalid_argument);
}
