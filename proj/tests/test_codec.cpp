#include <cmath>

#include "doctest.h"
#include "wiretap/codec_sim.hpp"
#include "wiretap/errors.hpp"

using namespace wiretap;

TEST_CASE("codebook words lie on the power sphere") {
    const Codebook cb = generate_codebook(8, 1.0, 2.0, 5);
    REQUIRE(cb.size == 256);
    for (std::uint64_t m = 0; m < cb.size; ++m) {
        double e = 0.0;
        for (double x : cb.word(m)) e += x * x;
        CHECK(e == doctest::Approx(8 * 2.0).epsilon(1e-12));
    }
    CHECK(generate_codebook(8, 1.0, 2.0, 5).codewords == cb.codewords);
}

TEST_CASE("codebook cap") { CHECK_THROWS_AS(generate_codebook(64, 0.5, 1.0, 1), ResourceCap); }

TEST_CASE("wilson interval contains the estimate") {
    const Interval ci = wilson_interval(0.1, 100);
    CHECK(ci.lo < 0.1);
    CHECK(ci.hi > 0.1);
    CHECK(wilson_interval(0.0, 100).lo == 0.0);
}

TEST_CASE("ensemble decoder agrees with exhaustive search") {
    // Average over independent codebooks so the exhaustive estimate tracks the ensemble mean.
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    FlashPhase ph;
    ph.tau = 0.5;
    ph.help_rate = 0.5;
    ph.levels = 2;
    for (double rate : {0.5, 0.75}) {
        const std::size_t n = 12;
        double exhaustive = 0.0;
        const int books = 40;
        SimSettings s;
        s.trials = 500;
        s.decoder = DecoderKind::Exhaustive;
        for (int b = 0; b < books; ++b) {
            s.seed = 100 + b;
            exhaustive += simulate_phase2_rx(p, ph, generate_codebook(n, rate, 1.0, 1000 + b), s).error_prob;
        }
        exhaustive /= books;
        s.decoder = DecoderKind::Ensemble;
        s.seed = 3;
        s.trials = 5000;
        const double ensemble = simulate_phase2_rx(p, ph, ensemble_codebook(n, rate, 1.0), s).error_prob;
        CAPTURE(rate);
        CHECK(ensemble == doctest::Approx(exhaustive).epsilon(0.15));
    }
}

TEST_CASE("spherical cap probability") {
    CHECK(std::exp(log_spherical_cap_prob(3, 0.0)) == doctest::Approx(0.5));
    CHECK(std::exp(log_spherical_cap_prob(3, 0.5)) == doctest::Approx(0.25));
    CHECK(log_spherical_cap_prob(64, 0.999) < -150.0);
}

TEST_CASE("renormalized tx power is exact in expectation") {
    const auto p = ChannelParams::degraded(2.0, 0.5, 1.0);
    FlashPhase ph;
    ph.tau = 0.25;
    ph.help_rate = 0.5;
    ph.levels = 4;
    SimSettings s;
    s.trials = 2000;
    const SimOutcome o = simulate_phase2_tx(p, ph, generate_codebook(8, 1.0, 1.0, 2), s);
    CHECK(o.mean_tx_power == doctest::Approx(2.0).epsilon(0.03));
}

TEST_CASE("account mode reports a power violation") {
    const auto p = ChannelParams::degraded(1.0, 2.0, 1.0);
    FlashPhase ph;
    ph.tau = 0.25;
    ph.help_rate = 0.5;
    ph.levels = 4;
    SimSettings s;
    s.trials = 10;
    s.power_mode = PowerMode::Account;
    CHECK_THROWS_AS(simulate_phase2_tx(p, ph, generate_codebook(4, 1.0, 1.0, 2), s), PowerViolation);
}

TEST_CASE("simulation is deterministic and worker-count independent") {
    const auto p = ChannelParams::non_degraded(1.0, 1.0, 1.0, 0.3);
    FlashPhase ph;
    ph.tau = 0.25;
    ph.help_rate = 0.5;
    ph.levels = 4;
    const Codebook cb = generate_codebook(8, 1.0, 1.0, 4);
    SimSettings s;
    s.trials = 300;
    s.record_trace = true;
    const SimOutcome a = simulate_phase2_rx(p, ph, cb, s);
    s.workers = 3;
    CHECK(simulate_phase2_rx(p, ph, cb, s) == a);
}

TEST_CASE("time sharing composite approaches the target") {
    const std::vector<double> grid{0.25, 0.125, 0.0625};
    TimeSharingSettings ts;
    ts.sim.trials = 200;
    const TimeSharingReport r =
        run_time_sharing(ChannelParams::degraded(1.0, 1.0, 1.0), HelpSpec::rx(0.5), grid, ts);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.monotone);
    CHECK(r.rows.back().composite_rate < r.target);
    const TimeSharingReport s =
        run_time_sharing(ChannelParams::degraded(1.0, 1.0, 1.0), HelpSpec::independent(0.25, 0.25), grid, ts);
    CHECK(s.rows[0].phases.size() == 2);
}
