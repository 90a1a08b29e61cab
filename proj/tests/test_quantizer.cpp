#include <cmath>
#include <random>

#include "doctest.h"
#include "wiretap/errors.hpp"
#include "wiretap/quantizer_help.hpp"
#include "wiretap/rng.hpp"

using namespace wiretap;

TEST_CASE("uniform quantizer cells and reconstruction") {
    const Quantizer q(1.0, 4, 2.0);
    CHECK(q.step() == doctest::Approx(1.0));
    CHECK(q.index(-10.0) == 0);
    CHECK(q.index(10.0) == 3);
    CHECK(q.reconstruction(0) == doctest::Approx(-1.5));
    CHECK(q(0.2) == doctest::Approx(0.5));
    CHECK(q.cell_lo(0) == -std::numeric_limits<double>::infinity());
    CHECK(q.cell_hi(1) == doctest::Approx(0.0));
}

TEST_CASE("expected mse matches Monte Carlo") {
    const Quantizer q(2.0, 8, 3.0);
    Rng rng = make_rng(1);
    std::normal_distribution<double> g(0.0, std::sqrt(2.0));
    std::vector<double> w(200000);
    for (double& v : w) v = g(rng);
    const HelpMessage m = quantize_noise(q, w);
    CHECK(m.residual_power == doctest::Approx(q.expected_mse()).epsilon(0.03));
    CHECK(m.side_info_bits == doctest::Approx(w.size() * 3.0));
    CHECK(m.empirical_entropy_bits <= m.side_info_bits + 1e-9);
}

TEST_CASE("mse-optimal clip beats the default") {
    for (std::uint64_t L : {4, 16, 256}) {
        const Quantizer a(1.0, L, mse_optimal_clip_mult(L));
        const Quantizer b(1.0, L, kDefaultClipMult);
        CHECK(a.expected_mse() <= b.expected_mse() + 1e-15);
    }
}

TEST_CASE("flash levels and resource cap") {
    CHECK(flash_levels(1.0, 0.25) == 16);
    CHECK(flash_levels(0.5, 0.5) == 2);
    CHECK_THROWS_AS(flash_levels(1.0, 1.0 / 64.0), ResourceCap);
}

TEST_CASE("schedules respect the help budget") {
    const FlashSchedule s = make_two_phase_schedule(0.5, 0.125, 64);
    CHECK(s.total_tau() == doctest::Approx(0.125));
    CHECK(s.help_rate_used() <= 0.5 + 1e-12);
    const FlashSchedule t = make_three_phase_schedule(0.25, 0.125, 0.25, 0.125, 64);
    CHECK(t.phases.size() == 2);
    CHECK(t.help_rate_used() <= 0.5 + 1e-12);
}

TEST_CASE("phase-2 rate prediction grows with levels") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const FlashSchedule a = make_two_phase_schedule(0.5, 0.25);
    const FlashSchedule b = make_two_phase_schedule(0.5, 0.125);
    const double h = gaussian_input_entropy_bits(p.power_limit);
    CHECK(phase2_rate_rx(p, b.phases[0], h).rate > phase2_rate_rx(p, a.phases[0], h).rate);
    CHECK(phase2_rate_rx(p, a.phases[0], h).leading == doctest::Approx(2.0));
}
