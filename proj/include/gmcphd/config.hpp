#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "gmcphd/cphd.hpp"
#include "gmcphd/models.hpp"
#include "gmcphd/ospa.hpp"
#include "gmcphd/track_linking.hpp"

namespace gmcphd {

/// Everything a CLI run needs. Defaults reproduce the organelle tracking
/// setup: p_S 0.99, p_D 0.98, σ 2.33 µm/s², σ_o 0.2 µm, Δ 1 s, T 1e-5,
/// U 0.004, J_max 200, OSPA c 30 and ℓ 1.
struct RunConfig {
    CVModelParams model;
    double survival_probability = defaults::survival_probability;
    double detection_probability = defaults::detection_probability;
    FilterConfig filter;
    OspaParams ospa;
    std::optional<double> link_gate;  // default_link_gate() when unset
    std::string scenario = "reference";
    std::uint64_t seed = 1;
    std::filesystem::path output_dir = ".";

    double effective_link_gate() const {
        return link_gate ? *link_gate : default_link_gate(model.sigma_obs, model.sampling_interval);
    }

    void validate() const {
        model.validate();
        if (!(survival_probability >= 0.0 && survival_probability <= 1.0)) throw ConfigError("p_s must lie in [0, 1]");
        if (!(detection_probability >= 0.0 && detection_probability <= 1.0)) throw ConfigError("p_d must lie in [0, 1]");
        filter.validate();
        ospa.validate();
        if (link_gate && !(*link_gate > 0.0)) throw ConfigError("link_gate must be > 0");
        if (scenario != "reference" && scenario != "single") {
            throw ConfigError("unknown scenario '" + scenario + "' (expected reference or single)");
        }
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_config_real(const std::string& v) {
    if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) throw std::invalid_argument("not a number");
    return x;
}

template <typename Int>
Int parse_config_integer(const std::string& v) {
    Int x{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
        throw std::invalid_argument("not a non-negative integer");
    }
    return x;
}

}  // namespace detail

/// Flat `key = value` text; `#` starts a comment. Unknown keys, duplicate
/// keys and malformed values raise ConfigError naming the line and key.
///
/// Keys: sampling_interval, sigma_x, sigma_y, sigma_o, p_s, p_d, prune_t,
/// merge_u, j_max, n_card_max, cutoff_c, order_l (number or `inf`),
/// link_gate, scenario (reference|single), seed, out.
inline RunConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    RunConfig cfg;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters = {
        {"sampling_interval", [&](const std::string& v) { cfg.model.sampling_interval = detail::parse_config_real(v); }},
        {"sigma_x", [&](const std::string& v) { cfg.model.sigma_x = detail::parse_config_real(v); }},
        {"sigma_y", [&](const std::string& v) { cfg.model.sigma_y = detail::parse_config_real(v); }},
        {"sigma_o", [&](const std::string& v) { cfg.model.sigma_obs = detail::parse_config_real(v); }},
        {"p_s", [&](const std::string& v) { cfg.survival_probability = detail::parse_config_real(v); }},
        {"p_d", [&](const std::string& v) { cfg.detection_probability = detail::parse_config_real(v); }},
        {"prune_t", [&](const std::string& v) { cfg.filter.prune_threshold = detail::parse_config_real(v); }},
        {"merge_u", [&](const std::string& v) { cfg.filter.merge_threshold = detail::parse_config_real(v); }},
        {"j_max", [&](const std::string& v) { cfg.filter.max_components = detail::parse_config_integer<std::size_t>(v); }},
        {"n_card_max",
         [&](const std::string& v) { cfg.filter.max_cardinality = detail::parse_config_integer<std::size_t>(v); }},
        {"cutoff_c", [&](const std::string& v) { cfg.ospa.cutoff = detail::parse_config_real(v); }},
        {"order_l", [&](const std::string& v) { cfg.ospa.order = detail::parse_config_real(v); }},
        {"link_gate", [&](const std::string& v) { cfg.link_gate = detail::parse_config_real(v); }},
        {"scenario", [&](const std::string& v) { cfg.scenario = v; }},
        {"seed", [&](const std::string& v) { cfg.seed = detail::parse_config_integer<std::uint64_t>(v); }},
        {"out", [&](const std::string& v) { cfg.output_dir = v; }},
    };

    std::map<std::string, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = detail::trim(std::string_view(line).substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        const std::string at = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ConfigError(at + ": expected 'key = value'");
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(at + ": unknown key '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end()) {
            throw ConfigError(at + ": key '" + key + "' already set on line " + std::to_string(prev->second));
        }
        seen.emplace(key, line_no);
        try {
            it->second(value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(at + ": bad value for '" + key + "': '" + value + "' (" + e.what() + ")");
        }
    }
    try {
        cfg.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    return parse_config(in, path.string());
}

}  // namespace gmcphd
