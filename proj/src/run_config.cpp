#include "wiretap/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wiretap {

namespace {

constexpr std::string_view kKeys[] = {
    "channel.structure", "channel.power",     "channel.sigma_w_sq",  "channel.sigma_v_sq",
    "channel.sigma_dw_sq", "channel.correlation", "help.placement",    "help.rate",
    "help.rate_tx",      "help.rate_rx",      "help.secure",         "help.causal",
    "help.message_aware", "feedback.rate",    "schedule.tau_grid",   "schedule.clip_mult",
    "sim.n",             "sim.trials",        "sim.seed",            "sim.code_rate_factor",
    "sim.decoder",       "sim.power_mode",    "sim.delta",           "sim.workers",
    "sim.leak_n",        "sim.leak_messages", "sim.leak_bins",       "output.dir",
    "output.format",
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    explicit Reader(const ConfigEntries& e) : e_(e) {}

    const ConfigEntry* find(std::string_view key) const {
        const auto it = e_.find(key);
        return it == e_.end() ? nullptr : &it->second;
    }
    bool has(std::string_view key) const { return find(key) != nullptr; }

    double number(std::string_view key) const {
        const ConfigEntry* en = need(key);
        return to_number(key, en->value, en->line);
    }
    double number_or(std::string_view key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    std::uint64_t integer_or(std::string_view key, std::uint64_t fallback) const {
        const ConfigEntry* en = find(key);
        if (!en) return fallback;
        std::uint64_t v = 0;
        const auto* first = en->value.data();
        const auto* last = first + en->value.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last)
            throw ConfigError(std::string(key), en->line, "expected a non-negative integer, got '" + en->value + "'");
        return v;
    }
    bool boolean_or(std::string_view key, bool fallback) const {
        const ConfigEntry* en = find(key);
        if (!en) return fallback;
        if (en->value == "true" || en->value == "1") return true;
        if (en->value == "false" || en->value == "0") return false;
        throw ConfigError(std::string(key), en->line, "expected true or false, got '" + en->value + "'");
    }
    std::string text_or(std::string_view key, std::string fallback) const {
        const ConfigEntry* en = find(key);
        return en ? en->value : fallback;
    }
    std::vector<double> list(std::string_view key) const {
        const ConfigEntry* en = need(key);
        std::vector<double> out;
        std::string_view rest = en->value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            out.push_back(to_number(key, std::string(item), en->line));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (out.empty()) throw ConfigError(std::string(key), en->line, "empty list");
        return out;
    }
    int line(std::string_view key) const {
        const ConfigEntry* en = find(key);
        return en ? en->line : 0;
    }
    const ConfigEntry* need(std::string_view key) const {
        const ConfigEntry* en = find(key);
        if (!en) throw ConfigError(std::string(key), 0, "required field is missing");
        return en;
    }

    template <class F>
    auto guarded(std::string_view key, F&& f) const {
        try {
            return f();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& ex) {
            throw ConfigError(std::string(key), line(key), ex.what());
        }
    }

private:
    static double to_number(std::string_view key, const std::string& text, int line) {
        double v = 0.0;
        const auto* first = text.data();
        const auto* last = first + text.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || text.empty())
            throw ConfigError(std::string(key), line, "expected a number, got '" + text + "'");
        return v;
    }

    const ConfigEntries& e_;
};

}  // namespace

ConfigError::ConfigError(const std::string& field, int line, const std::string& message)
    : InvalidParams((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + field + ": " + message),
      field_(field),
      line_(line) {}

std::span<const std::string_view> known_config_keys() { return kKeys; }

ConfigEntries parse_config_entries(std::string_view text) {
    ConfigEntries out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(std::string(line), line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys))
            throw ConfigError(key, line_no, "unknown key");
        if (value.empty()) throw ConfigError(key, line_no, "empty value");
        if (out.count(key)) throw ConfigError(key, line_no, "duplicate key (first set on line " +
                                                                std::to_string(out[key].line) + ")");
        out[key] = {value, line_no};
    }
    return out;
}

RunConfig build_config(const ConfigEntries& entries) {
    const Reader r(entries);
    RunConfig cfg;

    const Structure st = r.guarded("channel.structure", [&] { return parse_structure(r.need("channel.structure")->value); });
    const double power = r.number("channel.power");
    const double sv = r.number("channel.sigma_v_sq");
    switch (st) {
        case Structure::Degraded:
            cfg.channel = ChannelParams::degraded(power, r.number("channel.sigma_w_sq"), sv);
            break;
        case Structure::ReverselyDegraded: {
            cfg.channel = ChannelParams::reversely_degraded(power, sv, r.number("channel.sigma_dw_sq"));
            if (r.has("channel.sigma_w_sq") && r.number("channel.sigma_w_sq") != cfg.channel.sigma_w_sq)
                throw ConfigError("channel.sigma_w_sq", r.line("channel.sigma_w_sq"),
                                  "must equal sigma_v_sq + sigma_dw_sq for reversely degraded channels");
            break;
        }
        case Structure::NonDegraded:
            cfg.channel = ChannelParams::non_degraded(power, r.number("channel.sigma_w_sq"), sv,
                                                      r.number_or("channel.correlation", 0.0));
            break;
    }
    if (st != Structure::ReverselyDegraded && r.has("channel.sigma_dw_sq"))
        throw ConfigError("channel.sigma_dw_sq", r.line("channel.sigma_dw_sq"), "only used by reversely degraded channels");
    if (st != Structure::NonDegraded && r.has("channel.correlation"))
        throw ConfigError("channel.correlation", r.line("channel.correlation"), "only used by non-degraded channels");
    r.guarded("channel.structure", [&] { cfg.channel.validate(); return 0; });

    const HelpPlacement pl = r.guarded("help.placement", [&] { return parse_placement(r.text_or("help.placement", "none")); });
    const bool secure = r.boolean_or("help.secure", false);
    switch (pl) {
        case HelpPlacement::None: cfg.help = HelpSpec::none(); break;
        case HelpPlacement::RxOnly: cfg.help = HelpSpec::rx(r.number("help.rate"), secure); break;
        case HelpPlacement::TxOnly: cfg.help = HelpSpec::tx(r.number("help.rate"), secure); break;
        case HelpPlacement::TxAndRxSame: cfg.help = HelpSpec::tx_rx_same(r.number("help.rate"), secure); break;
        case HelpPlacement::TxAndRxIndependent:
            cfg.help = HelpSpec::independent(r.number("help.rate_tx"), r.number("help.rate_rx"), secure);
            if (r.has("help.rate") && std::abs(r.number("help.rate") - cfg.help.rate_rh) > 1e-12)
                throw ConfigError("help.rate", r.line("help.rate"), "must equal help.rate_tx + help.rate_rx");
            break;
    }
    cfg.help.causal = r.boolean_or("help.causal", true);
    cfg.help.message_aware = r.boolean_or("help.message_aware", false);
    r.guarded("help.placement", [&] { cfg.help.validate(); return 0; });

    if (r.has("feedback.rate")) cfg.feedback_rate = r.number("feedback.rate");

    if (r.has("schedule.tau_grid")) {
        cfg.schedule.tau_grid = r.list("schedule.tau_grid");
        for (double t : cfg.schedule.tau_grid)
            if (!(t > 0.0 && t <= 1.0))
                throw ConfigError("schedule.tau_grid", r.line("schedule.tau_grid"), "every tau must lie in (0, 1]");
    }
    if (r.has("schedule.clip_mult") && r.text_or("schedule.clip_mult", "") != "auto") {
        const double c = r.number("schedule.clip_mult");
        if (!(c > 0.0)) throw ConfigError("schedule.clip_mult", r.line("schedule.clip_mult"), "must be > 0 or 'auto'");
        cfg.schedule.clip_mult = c;
    }

    auto& sim = cfg.sim;
    sim.n = r.integer_or("sim.n", sim.n);
    sim.trials = r.integer_or("sim.trials", sim.trials);
    sim.seed = r.integer_or("sim.seed", sim.seed);
    sim.code_rate_factor = r.number_or("sim.code_rate_factor", sim.code_rate_factor);
    sim.decoder = r.guarded("sim.decoder", [&] { return parse_decoder(r.text_or("sim.decoder", "auto")); });
    sim.power_mode = r.guarded("sim.power_mode", [&] { return parse_power_mode(r.text_or("sim.power_mode", "renormalize")); });
    sim.delta = r.number_or("sim.delta", sim.delta);
    sim.workers = static_cast<unsigned>(r.integer_or("sim.workers", sim.workers));
    sim.leak_n = r.integer_or("sim.leak_n", sim.leak_n);
    sim.leak_messages = r.integer_or("sim.leak_messages", sim.leak_messages);
    sim.leak_bins = r.integer_or("sim.leak_bins", sim.leak_bins);
    if (sim.n < 2) throw ConfigError("sim.n", r.line("sim.n"), "must be >= 2");
    if (sim.trials < 1) throw ConfigError("sim.trials", r.line("sim.trials"), "must be >= 1");
    if (!(sim.code_rate_factor > 0.0)) throw ConfigError("sim.code_rate_factor", r.line("sim.code_rate_factor"), "must be > 0");
    if (sim.workers < 1) throw ConfigError("sim.workers", r.line("sim.workers"), "must be >= 1");
    if (sim.leak_n < 1 || sim.leak_n > 8) throw ConfigError("sim.leak_n", r.line("sim.leak_n"), "must lie in [1, 8]");
    if (sim.leak_messages < 1 || sim.leak_messages > 16)
        throw ConfigError("sim.leak_messages", r.line("sim.leak_messages"), "must lie in [1, 16]");
    if (sim.leak_bins < 2) throw ConfigError("sim.leak_bins", r.line("sim.leak_bins"), "must be >= 2");

    cfg.output.dir = r.text_or("output.dir", cfg.output.dir);
    cfg.output.format = r.text_or("output.format", cfg.output.format);
    if (cfg.output.format != "csv") throw ConfigError("output.format", r.line("output.format"), "only 'csv' is supported");
    return cfg;
}

RunConfig parse_config(std::string_view text) { return build_config(parse_config_entries(text)); }

RunConfig load_config(const std::string& path, ConfigEntries* entries_out) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", 0, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    ConfigEntries e = parse_config_entries(ss.str());
    RunConfig cfg = build_config(e);
    if (entries_out) *entries_out = std::move(e);
    return cfg;
}

}  // namespace wiretap
