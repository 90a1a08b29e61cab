#include <cmath>

#include "doctest.h"
#include "wiretap/capacity_engine.hpp"
#include "wiretap/discrete_oracle.hpp"
#include "wiretap/errors.hpp"

using namespace wiretap;
using namespace wiretap::oracle;

TEST_CASE("entropy of a uniform pair") {
    JointTable t(Model::DegradedMemoryless, {{"A", 2}, {"B", 2}});
    for (std::uint16_t a = 0; a < 2; ++a)
        for (std::uint16_t b = 0; b < 2; ++b) t.add(std::vector<std::uint16_t>{a, b}, 0.25);
    CHECK(H(t, {"A", "B"}) == doctest::Approx(2.0));
    CHECK(std::abs(I(t, {"A"}, {"B"})) < 1e-12);
}

TEST_CASE("random tables satisfy their declared chains") {
    for (Model m : converse_models()) {
        const JointTable t = random_consistent_table(m, {}, 42);
        CHECK(t.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
        const StepReport r = check_converse_chain(t, m);
        CAPTURE(to_string(m));
        CHECK(r.passed());
    }
}

TEST_CASE("deterministic tables pass too") {
    for (Model m : converse_models()) CHECK(check_converse_chain(deterministic_table(m, {}, 7), m).passed());
}

TEST_CASE("mismatched chain is rejected") {
    const JointTable t = random_consistent_table(Model::DegradedRx, {}, 1);
    CHECK_THROWS_AS(check_converse_chain(t, Model::ReverselyDegradedTx), InvalidParams);
}

TEST_CASE("non-degraded structure has no discrete factorization") {
    CHECK_THROWS(random_consistent_table(Structure::NonDegraded, {}, 1));
}

TEST_CASE("model names round trip") {
    for (Model m : converse_models()) CHECK(parse_model(to_string(m)) == m);
}

TEST_CASE("discretized gaussian reproduces the closed form") {
    const auto p = ChannelParams::degraded(1.0, 1.0, 1.0);
    const DiscretizedSecrecy d = discretized_secrecy_capacity(p, 48);
    CHECK(d.closed_form == doctest::Approx(no_help_secrecy_capacity(p)));
    CHECK(d.relative_error < 0.03);
}
