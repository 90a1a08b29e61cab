#include <cmath>

#include "doctest.h"
#include "wiretap/capacity_engine.hpp"
#include "wiretap/errors.hpp"

using namespace wiretap;

TEST_CASE("awgn capacity") {
    CHECK(awgn_capacity(1.0, 1.0) == doctest::Approx(0.5));
    CHECK(awgn_capacity(0.0, 1.0) == 0.0);
    CHECK(awgn_capacity(3.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("degraded rx help adds the help rate") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const auto r = secrecy_capacity_with_help(p, HelpSpec::rx(0.3));
    CHECK(r.exact);
    CHECK(r.cs0 == doctest::Approx(0.5 - 0.5 * std::log2(1.5)).epsilon(1e-12));
    CHECK(r.cs_lower == doctest::Approx(r.cs0 + 0.3).epsilon(1e-12));
    CHECK(r.cs_upper == r.cs_lower);
}

TEST_CASE("secure and public rx help agree") {
    const auto p = ChannelParams::non_degraded(2.0, 1.0, 0.5, 0.4);
    CHECK(secrecy_capacity_with_help(p, HelpSpec::rx(0.7, true)) ==
          secrecy_capacity_with_help(p, HelpSpec::rx(0.7, false)));
}

TEST_CASE("reversely degraded rx help gives the help rate") {
    const auto p = ChannelParams::reversely_degraded(1.0, 1.0, 0.5);
    const auto r = secrecy_capacity_with_help(p, HelpSpec::rx(0.4));
    CHECK(r.cs0 == 0.0);
    CHECK(r.cs_lower == doctest::Approx(0.4));
}

TEST_CASE("zero eavesdropper noise with public help kills secrecy") {
    const auto r = secrecy_capacity_with_help(ChannelParams::degraded(1.0, 1.0, 0.0), HelpSpec::rx(0.5));
    CHECK(r.cs_upper == 0.0);
    CHECK(r.has_note(kNoteSigmaVZeroNonSecure));
}

TEST_CASE("feedback saturates at the main channel capacity") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const auto low = feedback_comparison(p, 0.1);
    const auto high = feedback_comparison(p, 5.0);
    CHECK(low.c_sf == doctest::Approx(no_help_secrecy_capacity(p) + 0.1));
    CHECK(high.c_sf == doctest::Approx(0.5));
}

TEST_CASE("phase-2 leakage bound per structure") {
    CHECK(phase2_leakage_bound(ChannelParams::degraded(1.0, 1.0, 1.0), HelpSpec::rx(0.5)) == doctest::Approx(0.5));
    CHECK(phase2_leakage_bound(ChannelParams::reversely_degraded(1.0, 1.0, 1.0), HelpSpec::rx(0.5)) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(phase2_leakage_bound(ChannelParams::degraded(1.0, 1.0, 0.0), HelpSpec::rx(0.5)),
                    InfiniteCapacity);
}

TEST_CASE("negative help rate is rejected") {
    CHECK_THROWS_AS(secrecy_capacity_with_help(ChannelParams::degraded(1.0, 1.0, 1.0), HelpSpec::rx(-0.1)),
                    InvalidParams);
}
