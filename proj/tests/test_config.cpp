#include <sstream>

#include "doctest.h"
#include "wiretap/csv.hpp"
#include "wiretap/run_config.hpp"

using namespace wiretap;

namespace {
const char* kBase =
    "channel.structure = degraded\n"
    "channel.power = 1.0\n"
    "channel.sigma_w_sq = 1.0\n"
    "channel.sigma_v_sq = 1.0\n";
}

TEST_CASE("minimal config parses") {
    const RunConfig c = parse_config(std::string(kBase) + "help.placement = rx\nhelp.rate = 0.3\n");
    CHECK(c.channel.structure == Structure::Degraded);
    CHECK(c.help.placement == HelpPlacement::RxOnly);
    CHECK(c.help.rate_rh == doctest::Approx(0.3));
    CHECK(c.sim.n == 64);
}

TEST_CASE("missing field names the field") {
    try {
        parse_config("channel.structure = degraded\nchannel.power = 1\nchannel.sigma_w_sq = 1\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("channel.sigma_v_sq") != std::string::npos);
    }
}

TEST_CASE("unknown and duplicate keys are rejected") {
    CHECK_THROWS_AS(parse_config(std::string(kBase) + "channel.bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kBase) + "channel.power = 2\n"), ConfigError);
}

TEST_CASE("tau grid and clip parse") {
    const RunConfig c =
        parse_config(std::string(kBase) + "schedule.tau_grid = 0.5, 0.25\nschedule.clip_mult = auto\n");
    CHECK(c.schedule.tau_grid == std::vector<double>{0.5, 0.25});
    CHECK_FALSE(c.schedule.clip_mult);
    CHECK_THROWS_AS(parse_config(std::string(kBase) + "schedule.tau_grid = 0.5, 2\n"), ConfigError);
}

TEST_CASE("csv escaping and numbers") {
    CHECK(csv::escape("plain") == "plain");
    CHECK(csv::escape("a,b") == "\"a,b\"");
    CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv::number(0.5) == "0.5");
    CHECK(csv::number(std::numeric_limits<double>::infinity()) == "inf");
    std::ostringstream os;
    csv::write_row(os, {"a", "b,c"});
    CHECK(os.str() == "a,\"b,c\"\r\n");
}
