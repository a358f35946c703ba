#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gmcphd/commands.hpp"
#include "gmcphd/config.hpp"
#include "gmcphd/error.hpp"

namespace {

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> p_d;
    std::optional<double> cutoff_c;
    std::optional<std::string> order_l;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Configuration file (key = value)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--p-d", o.p_d, "Detection probability");
    cmd->add_option("--cutoff-c", o.cutoff_c, "OSPA cutoff c");
    cmd->add_option("--order-l", o.order_l, "OSPA order l (number or inf)");
}

gmcphd::RunConfig resolve(const Overrides& o) {
    gmcphd::RunConfig cfg = o.config.empty() ? gmcphd::RunConfig{} : gmcphd::load_config(o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (o.out) cfg.output_dir = *o.out;
    if (o.p_d) cfg.detection_probability = *o.p_d;
    if (o.cutoff_c) cfg.ospa.cutoff = *o.cutoff_c;
    if (o.order_l) {
        try {
            cfg.ospa.order = gmcphd::detail::parse_config_real(*o.order_l);
        } catch (const std::invalid_argument&) {
            throw gmcphd::ConfigError("--order-l: expected a number or 'inf', got '" + *o.order_l + "'");
        }
    }
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw gmcphd::ConfigError("cannot create output directory " + cfg.output_dir.string() + ": " + ec.message());
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GM-CPHD multi-object tracker"};
    app.require_subcommand(1);

    Overrides o;
    std::string detections, truth, tracks;

    auto* simulate = app.add_subcommand("simulate", "Generate ground truth and detections");
    add_common(simulate, o);

    auto* track = app.add_subcommand("track", "Run the filter on a detections file");
    add_common(track, o);
    track->add_option("--detections", detections, "detections.csv")->required();

    auto* evaluate = app.add_subcommand("evaluate", "OSPA between truth and tracks");
    add_common(evaluate, o);
    evaluate->add_option("--truth", truth, "truth.csv")->required();
    evaluate->add_option("--tracks", tracks, "tracks.csv")->required();

    auto* analyze = app.add_subcommand("analyze", "Acceleration normality analysis");
    add_common(analyze, o);
    analyze->add_option("--tracks", tracks, "tracks.csv or truth.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : gmcphd::exit_code::config;
    }

    try {
        const gmcphd::RunConfig cfg = resolve(o);
        if (*simulate) gmcphd::commands::run_simulate(cfg, std::cout);
        if (*track) gmcphd::commands::run_track(detections, cfg, std::cout);
        if (*evaluate) gmcphd::commands::run_evaluate(truth, tracks, cfg, std::cout);
        if (*analyze) gmcphd::commands::run_analyze(tracks, cfg, std::cout);
    } catch (const gmcphd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return gmcphd::exit_code::config;
    } catch (const gmcphd::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return gmcphd::exit_code::data;
    } catch (const gmcphd::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return gmcphd::exit_code::numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
