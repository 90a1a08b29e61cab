#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/capacity_engine.hpp"
#include "wiretap/channel_model.hpp"
#include "wiretap/codec_sim.hpp"
#include "wiretap/errors.hpp"

namespace wiretap {

// Flat "section.key = value" text. '#' starts a comment.
class ConfigError : public InvalidParams {
public:
    ConfigError(const std::string& field, int line, const std::string& message);
    const std::string& field() const { return field_; }
    int line() const { return line_; }  // 0 when the field is missing altogether

private:
    std::string field_;
    int line_;
};

struct ScheduleConfig {
    std::vector<double> tau_grid{0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::optional<double> clip_mult;  // empty ("auto"): MSE-optimal per level count
};

struct SimConfig {
    std::size_t n = 64;
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    double code_rate_factor = 0.5;
    DecoderKind decoder = DecoderKind::Auto;
    PowerMode power_mode = PowerMode::Renormalize;
    double delta = 0.0;
    unsigned workers = 1;
    std::size_t leak_n = 2;         // leakage block length
    std::size_t leak_messages = 4;  // leakage codebook size
    std::size_t leak_bins = 24;
};

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv";
};

struct RunConfig {
    ChannelParams channel;
    HelpSpec help;
    std::optional<double> feedback_rate;
    ScheduleConfig schedule;
    SimConfig sim;
    OutputConfig output;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
};
using ConfigEntries = std::map<std::string, ConfigEntry, std::less<>>;

std::span<const std::string_view> known_config_keys();

ConfigEntries parse_config_entries(std::string_view text);
RunConfig build_config(const ConfigEntries& entries);
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path, ConfigEntries* entries_out = nullptr);

}  // namespace wiretap
