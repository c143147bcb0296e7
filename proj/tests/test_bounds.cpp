#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "asuman/bounds.hpp"

using namespace asuman::bounds;

TEST_CASE("minimum age recurrence closed form") {
    // lambda_e = lambda: ratio r = 1/2, partial sums 0, 1, 3/2, 7/4, ...
    CHECK(min_age_mean(0, 1, 1) == doctest::Approx(0.0));
    CHECK(min_age_mean(1, 1, 1) == doctest::Approx(1.0));
    CHECK(min_age_mean(2, 1, 1) == doctest::Approx(1.5));
    CHECK(min_age_mean(3, 1, 1) == doctest::Approx(1.75));
    CHECK(min_age_limit(1, 1) == doctest::Approx(2.0));
    CHECK(min_age_limit(2, 1) == doctest::Approx(3.0));
    // lambda_e = 0: a direct update lands in every epoch
    CHECK(min_age_mean(0, 0, 1) == 0.0);
    CHECK(min_age_mean(5, 0, 1) == 1.0);
    CHECK_THROWS_AS(min_age_mean(-1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(min_age_mean(2, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(min_age_mean(2, -1, 1), std::invalid_argument);
}

TEST_CASE("complete graph steady-state bound") {
    // n = 2, B = 2: link = 2, (1 + 2*2) / (1/2 + 2) = 2
    CHECK(asuman_ub(2, 2, 1, 1) == doctest::Approx(2.0));
    CHECK(asuman_ub_limit(1, 1) == doctest::Approx(3.0));
    CHECK(asuman_ub_limit(2, 1) == doctest::Approx(5.0));
    // the finite-n bound approaches its limit from below as n grows at B = n*lambda
    double prev = 0.0;
    for (int n : {10, 100, 1000, 10000}) {
        double v = asuman_ub(n, n, 1, 1);
        CHECK(v > prev);
        CHECK(v < 3.0);
        prev = v;
    }
    CHECK(asuman_ub(10000, 10000, 1, 1) == doctest::Approx(3.0).epsilon(1e-3));
    CHECK_THROWS_AS(asuman_ub(1, 1, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(asuman_ub(10, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("sensing envelope") {
    CHECK(sensing_envelope(1, 1, 1) == doctest::Approx(1.0));
    CHECK(sensing_envelope(2, 1, 1) == doctest::Approx(2.5));
    CHECK(sensing_envelope(3, 1, 1) == doctest::Approx(3.25));
    CHECK(sensing_envelope_limit(1, 1) == doctest::Approx(4.0));
    // the envelope obeys b[k+1] = r*b[k] + 2 above k = 1
    double r = 0.5;
    for (int k = 2; k < 8; ++k)
        CHECK(sensing_envelope(k + 1, 1, 1) == doctest::Approx(r * sensing_envelope(k, 1, 1) + 2.0));
    CHECK_THROWS_AS(sensing_envelope(0, 1, 1), std::invalid_argument);
}

TEST_CASE("probability of leaving the minimum-age set") {
    CHECK(not_min_prob_lb(2, 1, 1) == doctest::Approx(1.0 / 7.0));
    CHECK(not_min_prob_lb(3, 1, 1) == doctest::Approx(0.2));
    CHECK(not_min_prob_lb_limit(1, 1) == doctest::Approx(1.0 / 3.0));
    CHECK(not_min_prob_lb_limit(0, 1) == 0.0);
    CHECK_THROWS_AS(not_min_prob_lb(1, 1, 1), std::invalid_argument);
}

TEST_CASE("partial connectivity bound") {
    CHECK(partial_pi(0.5, 1, 1) == doctest::Approx(1.0 / 9.0));
    CHECK(partial_ub(0.5, 1, 1) == doctest::Approx(11.0));
    CHECK(partial_pi(1.0, 1, 1) == doctest::Approx(1.0 / 6.0));
    CHECK(partial_ub(1.0 / 3.0, 1, 1) == doctest::Approx(14.0));
    // sparser connectivity gives a larger bound
    CHECK(partial_ub(0.25, 1, 1) > partial_ub(0.5, 1, 1));
    CHECK_THROWS_AS(partial_pi(0.0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(partial_pi(1.5, 1, 1), std::invalid_argument);
}

TEST_CASE("ring lower bound") {
    CHECK(ring_lb(30, 1, 1) == doctest::Approx(10.0));
    CHECK(ring_lb(60, 1, 1) == doctest::Approx(20.0));
    CHECK(ring_lb(60, 2, 1) == doctest::Approx(40.0));
    CHECK_THROWS_AS(ring_lb(2, 1, 1), std::invalid_argument);
}

TEST_CASE("clustered network bounds") {
    // c = 4, p = 1/2: x = 2/3, num = 7/3, den = 11/12
    CHECK(cluster_head_ub(4, 0.5, 1, 1) == doctest::Approx(28.0 / 11.0));
    CHECK(cluster_head_ub_limit(0.5, 1, 1) == doctest::Approx(4.0));
    // m = 4, p = 1/2, head age 2: (1 + 1/4 + 20/3) / (1/8 + 4/3)
    CHECK(cluster_leaf_ub(4, 0.5, 1, 1, 2.0) == doctest::Approx(38.0 / 7.0));
    CHECK(cluster_leaf_ub_limit(0.5, 1, 1) == doctest::Approx(8.0));

    SplitOptimum opt = cluster_optimum(1, 1);
    CHECK(opt.p_star == doctest::Approx(0.5));
    CHECK(opt.value == doctest::Approx(8.0));
    CHECK(cluster_optimum(2, 1).value == doctest::Approx(14.0));
    // p = 1/2 really is the best split of the limit bound
    for (double p : {0.2, 0.35, 0.65, 0.8})
        CHECK(cluster_leaf_ub_limit(p, 1, 1) > opt.value);

    CHECK(disconnected_cluster_ub(10, 1, 1) == doctest::Approx(13.0));
    CHECK(ring_cluster_ub(8, 0.5, 1, 1) == doctest::Approx(4.0 + std::sqrt(8.0 * std::numbers::pi)));
    CHECK_THROWS_AS(cluster_head_ub(1, 0.5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ring_cluster_ub(2, 0.5, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(cluster_leaf_ub(4, 0.0, 1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("asymmetric arrival bounds") {
    // lambda_i = 1, n = 2, B = 2: num = 5, den = 3
    CHECK(asym_ub(1, 2, 2, 1, 1) == doctest::Approx(5.0 / 3.0));
    AsymLimits lim = asym_limits(1, 1);
    CHECK(lim.worst == doctest::Approx(3.0));
    CHECK(lim.best == doctest::Approx(1.5));
    // the bound falls as the node's own direct rate rises
    CHECK(asym_ub(0.1, 100, 100, 1, 1) > asym_ub(0.9, 100, 100, 1, 1));
    CHECK_THROWS_AS(asym_ub(-0.5, 100, 100, 1, 1), std::invalid_argument);
}

TEST_CASE("power law bounds") {
    CHECK(power_law_ub(1, 0.5, 2, 1, 1) == doctest::Approx(15.0 / 8.0));
    CHECK(power_law_ub_limit(1, 0.35, 1, 1) == doctest::Approx(20.0 / 11.0));
    // stale end of the profile approaches the symmetric worst case
    CHECK(power_law_ub(100, 0.35, 100, 1, 1) < 3.0);
    CHECK(power_law_ub(100, 0.35, 100, 1, 1) > 2.9);
    // every limit lies between the two constants
    for (int i = 1; i <= 20; ++i) {
        double v = power_law_ub_limit(i, 0.75, 1, 1);
        CHECK(v <= 3.0);
        CHECK(v >= 1.5);
    }
    CHECK_THROWS_AS(power_law_ub(0, 0.5, 10, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(power_law_ub(11, 0.5, 10, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(power_law_ub(1, 1.0, 10, 1, 1), std::invalid_argument);
}

TEST_CASE("bound report rendering") {
    std::vector<BoundReport> reports = {
        {"ring-lb", "n=30", BoundKind::Lower, 10.0},
        {"asuman-limit", "", BoundKind::Limit, 3.0},
    };
    CHECK(render_csv(reports) ==
          "name,params,kind,value\nring-lb,n=30,lower,10\nasuman-limit,,limit,3\n");
    std::string text = render_text(reports);
    CHECK(text.find("name") != std::string::npos);
    CHECK(text.find("ring-lb") != std::string::npos);
    CHECK(text.find("lower") != std::string::npos);
    CHECK(text.find("10") != std::string::npos);
    CHECK(std::string(bound_kind_name(BoundKind::Exact)) == "exact");
}

TEST_CASE("monte carlo recurrences track the closed forms") {
    RecurrenceParams p;  // lambda_e = lambda = 1, limit form

    SUBCASE("minimum age chain") {
        auto est = mc_recurrence(RecurrenceKind::MinAge, p, 8, 20000, 99);
        CHECK(est.mean[1] == 1.0);  // both branches of the first step give 1
        CHECK(est.std_error[1] == 0.0);
        for (int k = 2; k <= 8; ++k) {
            double want = min_age_mean(k, 1, 1);
            CHECK(std::fabs(est.mean[k] - want) <= 4.0 * est.std_error[k] + 1e-12);
        }
    }
    SUBCASE("ring chain settles at the lower bound") {
        p.n = 60;
        auto est = mc_recurrence(RecurrenceKind::Ring, p, 400, 20000, 77);
        // first step: survives with probability lambda_e / (lambda_e + 3 lambda / n)
        double survive = 1.0 / (1.0 + 3.0 / 60.0);
        CHECK(std::fabs(est.mean[1] - survive) <= 4.0 * est.std_error[1]);
        CHECK(std::fabs(est.mean[400] - ring_lb(60, 1, 1)) <= 4.0 * est.std_error[400]);
    }
    SUBCASE("sensing chain stays under its envelope") {
        auto est = mc_recurrence(RecurrenceKind::Sensing, p, 30, 20000, 55);
        for (int k = 1; k <= 30; ++k)
            CHECK(est.mean[k] <= sensing_envelope(k, 1, 1) + 4.0 * est.std_error[k]);
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(mc_recurrence(RecurrenceKind::MinAge, p, 0, 100, 1), std::invalid_argument);
        CHECK_THROWS_AS(mc_recurrence(RecurrenceKind::MinAge, p, 5, 1, 1), std::invalid_argument);
        RecurrenceParams bad = p;
        bad.lambda_e = 0.0;
        CHECK_THROWS_AS(mc_recurrence(RecurrenceKind::MinAge, bad, 5, 100, 1), std::invalid_argument);
        RecurrenceParams ring = p;
        ring.n = 2;
        CHECK_THROWS_AS(mc_recurrence(RecurrenceKind::Ring, ring, 5, 100, 1), std::invalid_argument);
        RecurrenceParams pre = p;
        pre.limit_form = false;
        CHECK_THROWS_AS(mc_recurrence(RecurrenceKind::Sensing, pre, 5, 100, 1), std::invalid_argument);
    }
}
