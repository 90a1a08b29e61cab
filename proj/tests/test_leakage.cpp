#include <cmath>

#include "doctest.h"
#include "wiretap/errors.hpp"
#include "wiretap/leakage_lab.hpp"

using namespace wiretap;

TEST_CASE("every leakage chain passes at default parameters") {
    const ChannelParams d = ChannelParams::degraded(1.0, 1.0, 1.0);
    const ChannelParams rd = ChannelParams::reversely_degraded(1.0, 1.0, 1.0);
    const ChannelParams nd = ChannelParams::non_degraded(1.0, 1.0, 1.0, 0.5);
    const ChannelParams dtx = ChannelParams::degraded(2.0, 0.5, 1.0);
    CHECK(verify_leakage_chain(d, LeakageChain::DegradedRx).passed());
    CHECK(verify_leakage_chain(rd, LeakageChain::ReverselyDegradedRx).passed());
    CHECK(verify_leakage_chain(nd, LeakageChain::NonDegradedRx).passed());
    CHECK(verify_leakage_chain(dtx, LeakageChain::DegradedTx).passed());
    CHECK(verify_leakage_chain(d, LeakageChain::EntropyGap).passed());
}

TEST_CASE("conditional entropy routes agree") {
    const ConditionalEntropyRoutes r = conditional_entropy_routes(1.0, 0.5);
    CHECK(r.entropy_difference == doctest::Approx(r.closed_form).epsilon(1e-12));
    CHECK(r.conditional_variance == doctest::Approx(r.closed_form).epsilon(1e-12));
    CHECK(r.quadrature == doctest::Approx(r.closed_form).epsilon(1e-6));
}

TEST_CASE("plug-in leakage without help information is bounded by the wiretap mutual information") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const Codebook cb = generate_codebook(1, 2.0, 1.0, 3);
    LeakageOptions lo;
    lo.levels = 4;
    const LeakageEstimate secure = estimate_leakage_discrete(p, HelpSpec::rx(1.0, true), cb, lo);
    const LeakageEstimate pub = estimate_leakage_discrete(p, HelpSpec::rx(1.0, false), cb, lo);
    CHECK(secure.value <= awgn_capacity(1.0, 2.0) + kLeakageSlack);
    CHECK(pub.value >= secure.value - 1e-9);
    CHECK(pub.value <= pub.bound + kLeakageSlack);
    CHECK(pub.refinement.size() >= 2);
}

TEST_CASE("single message leaks nothing") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    LeakageOptions lo;
    lo.levels = 2;
    CHECK(estimate_leakage_discrete(p, HelpSpec::rx(1.0), generate_codebook(2, 0.0, 1.0, 1), lo).value == 0.0);
}

TEST_CASE("leakage estimator guards") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    LeakageOptions lo;
    CHECK_THROWS_AS(estimate_leakage_discrete(p, HelpSpec::independent(0.5, 0.5), generate_codebook(1, 1.0, 1.0, 1), lo),
                    Unsupported);
    CHECK_THROWS_AS(estimate_leakage_discrete(p, HelpSpec::rx(1.0), generate_codebook(1, 5.0, 1.0, 1), lo),
                    ResourceCap);
}

TEST_CASE("composite leakage is linear in tau for a silent first phase") {
    const auto rd = ChannelParams::reversely_degraded(1.0, 1.0, 1.0);
    const std::vector<double> tau{0.5, 0.25, 0.125};
    const std::vector<double> est{0.3, 0.3, 0.3};
    const CompositeLeakageTable t = composite_leakage(rd, HelpSpec::rx(0.5), tau, est, 0.0);
    CHECK(t.slope == doctest::Approx(0.3));
    CHECK(t.rows[2].composite == doctest::Approx(0.0375));
}

TEST_CASE("least squares slope") {
    const std::vector<double> x{1, 2, 3}, y{1, 3, 5};
    CHECK(least_squares_slope(x, y) == doctest::Approx(2.0));
    CHECK_THROWS_AS(least_squares_slope(std::vector<double>{1.0}, std::vector<double>{1.0}), InvalidParams);
}
