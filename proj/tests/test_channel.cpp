#include <cmath>
#include <numeric>

#include "doctest.h"
#include "wiretap/channel_model.hpp"
#include "wiretap/errors.hpp"

using namespace wiretap;

namespace {
double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }
double cov(const std::vector<double>& a, const std::vector<double>& b) {
    const double ma = mean(a), mb = mean(b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / a.size();
}
}  // namespace

TEST_CASE("degraded noise covariance matches configuration") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const NoiseDraw d = sample_noise(p, 100000, 3);
    CHECK(cov(d.w_seq, d.w_seq) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(cov(d.v_seq, d.v_seq) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(cov(d.w_seq, d.v_seq)) < 0.05);
}

TEST_CASE("non-degraded correlation is realized") {
    const auto p = ChannelParams::non_degraded(1.0, 1.0, 2.0, 0.9);
    const NoiseDraw d = sample_noise(p, 100000, 4);
    const double r = cov(d.w_seq, d.v_seq) / std::sqrt(cov(d.w_seq, d.w_seq) * cov(d.v_seq, d.v_seq));
    CHECK(std::abs(r - 0.9) < 0.01);
}

TEST_CASE("reversely degraded invariant holds exactly") {
    const auto p = ChannelParams::reversely_degraded(1.0, 0.7, 0.3);
    CHECK(p.sigma_w_sq == 0.7 + 0.3);
    const NoiseDraw d = sample_noise(p, 1000, 5);
    REQUIRE(d.dw_seq);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.w_seq[i] == d.v_seq[i] + (*d.dw_seq)[i]);
}

TEST_CASE("transmit adds the configured noise") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const NoiseDraw d = sample_noise(p, 16, 6);
    std::vector<double> x(16, 0.5);
    const ChannelOutput o = transmit(p, x, d);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(o.y_seq[i] == 0.5 + d.w_seq[i]);
        CHECK(o.z_seq[i] == o.y_seq[i] + d.v_seq[i]);
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto p = ChannelParams::non_degraded(1.0, 1.0, 1.0, -0.3);
    CHECK(sample_noise(p, 64, 11).w_seq == sample_noise(p, 64, 11).w_seq);
    CHECK(sample_noise(p, 64, 11).w_seq != sample_noise(p, 64, 12).w_seq);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(ChannelParams::degraded(-1.0, 1.0, 1.0).validate(), InvalidParams);
    CHECK_THROWS_AS(ChannelParams::degraded(1.0, -1.0, 1.0).validate(), InvalidParams);
    CHECK_THROWS_AS(ChannelParams::non_degraded(1.0, 1.0, 1.0, 1.5).validate(), InvalidParams);
    CHECK_THROWS_AS(sample_noise(ChannelParams::degraded(1.0, -1.0, 1.0), 4, 1), InvalidParams);
    CHECK(ChannelParams::non_degraded(1.0, 1.0, 1.0, 1.0).singular());
}
