#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wiretap/capacity_engine.hpp"
#include "wiretap/channel_model.hpp"
#include "wiretap/rng.hpp"
#include "wiretap/run_config.hpp"

namespace wiretap {

struct VerifyItem {
    std::string id;
    std::string anchor;
    bool passed = false;
    std::size_t checks = 0;
    std::size_t violations = 0;
    double worst_slack = 0.0;  // most negative step slack seen (0 when none were negative)
    std::string detail;
};

struct VerifyOptions {
    std::size_t tables_per_model = 200;
    std::size_t formula_samples = 200;
    std::uint64_t seed = 1;
    std::size_t discretized_points = 64;
};

// Random valid parameters; sigma_v_sq, sigma_dw_sq > 0 and |r| < 1.
ChannelParams random_channel(Structure s, Rng& rng);

struct FormulaSuiteResult {
    std::size_t checks = 0;
    std::size_t failures = 0;
    double max_abs_error = 0.0;
    std::vector<std::string> failed;  // first few failure descriptions
};
// Exact-case identities of the closed-form engine over random tuples (per configuration).
FormulaSuiteResult formula_suite(std::size_t samples, std::uint64_t seed);

struct FeedbackSweepResult {
    std::size_t points = 0;
    std::size_t failures = 0;
    double breakpoint = 0.0;
    double max_abs_error = 0.0;
};
FeedbackSweepResult feedback_sweep(const ChannelParams& params, std::size_t points);

std::vector<VerifyItem> run_verify_all(const VerifyOptions& options);
std::vector<VerifyItem> run_verify_config(const RunConfig& config, const VerifyOptions& options);

}  // namespace wiretap
