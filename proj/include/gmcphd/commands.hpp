#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "gmcphd/acceleration.hpp"
#include "gmcphd/config.hpp"
#include "gmcphd/cphd.hpp"
#include "gmcphd/csv.hpp"
#include "gmcphd/evaluation.hpp"
#include "gmcphd/sim.hpp"
#include "gmcphd/track_linking.hpp"

namespace gmcphd::commands {

namespace fs = std::filesystem;

/// One object moving at constant velocity for 100 steps.
inline sim::ScenarioSpec single_object_scenario(std::uint64_t seed) {
    sim::ScenarioSpec spec;
    spec.duration = 100;
    spec.motion = CVModelParams{1.0, 0.05, 0.05, 0.2};
    spec.seed = seed;
    Vector x(4);
    x << 0.0, 1.0, 0.0, 0.5;
    spec.birth_events.push_back({0, std::move(x), 100});
    return spec;
}

inline sim::ScenarioSpec scenario_for(const RunConfig& cfg) {
    sim::ScenarioSpec spec =
        cfg.scenario == "single" ? single_object_scenario(cfg.seed) : sim::reference_scenario(cfg.seed);
    spec.detection_probability = cfg.detection_probability;
    spec.motion.sampling_interval = cfg.model.sampling_interval;
    spec.motion.sigma_obs = cfg.model.sigma_obs;
    return spec;
}

struct SimulateResult {
    sim::Scenario scenario;
    std::size_t track_count = 0;
};

/// Writes truth.csv and detections.csv into cfg.output_dir.
inline SimulateResult run_simulate(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto spec = scenario_for(cfg);
    SimulateResult r{sim::generate(spec), spec.birth_events.size()};
    io::write_track_points(cfg.output_dir / "truth.csv", io::truth_points(r.scenario.truth));
    io::write_detections(cfg.output_dir / "detections.csv", r.scenario.detections);

    std::size_t detections = 0, empty_frames = 0;
    for (const auto& f : r.scenario.detections) {
        detections += f.measurements.size();
        empty_frames += f.measurements.empty() ? 1 : 0;
    }
    log << "scenario: " << cfg.scenario << " (seed " << cfg.seed << ")\n"
        << "tracks: " << r.track_count << "\n"
        << "steps: " << spec.duration << "\n"
        << "detections: " << detections << " (frames without detections: " << empty_frames << ")\n";
    return r;
}

struct TrackResult {
    std::vector<TrackPoint> points;
    std::vector<io::CardinalityRow> cardinality;
    std::vector<Extraction> extractions;
    std::vector<double> consistency_gap;  // |mass - E[n]| per step
    double seconds = 0.0;
};

/// Runs the filter over a detection sequence and links the per-frame
/// estimates into labeled tracks.
inline TrackResult track_frames(const std::vector<sim::DetectionFrame>& frames, const RunConfig& cfg,
                                std::ostream& log) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    CphdFilter filter(build_cv_motion(cfg.model, cfg.survival_probability),
                      build_position_measurement(cfg.model, cfg.detection_probability),
                      build_quadrant_birth_model(cfg.filter.max_cardinality), cfg.filter);

    TrackResult r;
    std::vector<TimedEstimates> timed;
    timed.reserve(frames.size());
    for (const auto& frame : frames) {
        Extraction e = filter.step(frame.measurements);
        const FilterState& s = filter.state();
        r.cardinality.push_back({frame.time_index, e.map_cardinality, s.expected_cardinality()});
        r.consistency_gap.push_back(s.consistency_gap());
        if (s.consistency_gap() > 0.5) {
            log << "warning: step " << frame.time_index << ": intensity mass " << s.intensity.total_mass()
                << " vs expected count " << s.expected_cardinality() << "\n";
        }
        if (e.shortfall) {
            log << "warning: step " << frame.time_index << ": MAP count " << e.map_cardinality << " exceeds "
                << s.intensity.size() << " mixture components\n";
        }
        timed.push_back({frame.time_index, e.estimates});
        r.extractions.push_back(std::move(e));
    }

    for (const auto& track : link_tracks(timed, cfg.effective_link_gate())) {
        for (std::size_t k = 0; k < track.points.size(); ++k) {
            const auto& est = track.points[k];
            r.points.push_back({track.id, track.start_time + static_cast<long>(k), est.state(0), est.state(1),
                                est.state(2), est.state(3), est.weight});
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// Writes tracks.csv and cardinality.csv into cfg.output_dir.
inline TrackResult run_track(const fs::path& detections_path, const RunConfig& cfg, std::ostream& log) {
    const auto frames = io::read_detections(detections_path);
    TrackResult r = track_frames(frames, cfg, log);
    io::write_track_points(cfg.output_dir / "tracks.csv", r.points);
    io::write_cardinality(cfg.output_dir / "cardinality.csv", r.cardinality);

    std::map<long, int> ids;
    for (const auto& p : r.points) ids[p.track_id] = 1;
    log << "frames: " << frames.size() << "\n"
        << "tracks: " << ids.size() << "\n"
        << "elapsed_s: " << r.seconds << "\n";
    return r;
}

struct EvaluateResult {
    long first_step = 0;
    OspaSeries series;
};

namespace detail {

inline std::pair<long, long> time_range(const std::vector<TrackPoint>& pts, const std::string& what) {
    if (pts.empty()) throw DataError(what + " contains no rows");
    long lo = pts.front().time_index, hi = lo;
    for (const auto& p : pts) {
        lo = std::min(lo, p.time_index);
        hi = std::max(hi, p.time_index);
    }
    return {lo, hi};
}

inline double round_trip(double x) {
    const std::string s = io::format_real(x);
    return std::stod(s);
}

}  // namespace detail

/// OSPA between truth.csv and tracks.csv over the union of their time ranges.
/// Writes ospa.csv and ospa_summary.txt. Summary statistics are computed
/// from the values as written to ospa.csv.
inline EvaluateResult run_evaluate(const fs::path& truth_path, const fs::path& tracks_path, const RunConfig& cfg,
                                   std::ostream& log) {
    cfg.validate();
    const auto truth = io::read_track_points(truth_path);
    const auto tracks = io::read_track_points(tracks_path);
    const auto [t_lo, t_hi] = detail::time_range(truth, truth_path.string());
    const auto [e_lo, e_hi] = detail::time_range(tracks, tracks_path.string());
    if (e_hi < t_lo || t_hi < e_lo) {
        throw DataError("time ranges are disjoint: truth " + std::to_string(t_lo) + ".." + std::to_string(t_hi) +
                        ", tracks " + std::to_string(e_lo) + ".." + std::to_string(e_hi));
    }
    const long lo = std::min(t_lo, e_lo);
    const long hi = std::max(t_hi, e_hi);
    const auto steps = static_cast<std::size_t>(hi - lo + 1);

    std::vector<std::vector<Vector>> x(steps), y(steps);
    auto add = [lo](std::vector<std::vector<Vector>>& dst, const TrackPoint& p) {
        Vector v(2);
        v << p.p_x, p.p_y;
        dst[static_cast<std::size_t>(p.time_index - lo)].push_back(std::move(v));
    };
    for (const auto& p : truth) add(x, p);
    for (const auto& p : tracks) add(y, p);

    EvaluateResult r{lo, ospa_series(std::span<const std::vector<Vector>>(x), std::span<const std::vector<Vector>>(y),
                                     cfg.ospa)};
    for (auto& s : r.series.per_step) {
        s.total = detail::round_trip(s.total);
        s.localization = detail::round_trip(s.localization);
        s.cardinality = detail::round_trip(s.cardinality);
    }
    // Recompute summaries from the rounded columns.
    OspaSeries rounded = r.series;
    rounded.mean = {};
    rounded.max = {};
    for (const auto& s : rounded.per_step) {
        rounded.mean.total += s.total;
        rounded.mean.localization += s.localization;
        rounded.mean.cardinality += s.cardinality;
        rounded.max.total = std::max(rounded.max.total, s.total);
        rounded.max.localization = std::max(rounded.max.localization, s.localization);
        rounded.max.cardinality = std::max(rounded.max.cardinality, s.cardinality);
    }
    const double k = static_cast<double>(rounded.per_step.size());
    rounded.mean.total /= k;
    rounded.mean.localization /= k;
    rounded.mean.cardinality /= k;
    r.series = std::move(rounded);

    io::write_ospa(cfg.output_dir / "ospa.csv", lo, r.series);

    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "# OSPA cutoff_c=%.17g order_l=%.17g\n"
                  "steps=%zu\n"
                  "mean_total=%.17g\nmean_localization=%.17g\nmean_cardinality_err=%.17g\n"
                  "max_total=%.17g\nmax_localization=%.17g\nmax_cardinality_err=%.17g\n",
                  cfg.ospa.cutoff, cfg.ospa.order, steps, r.series.mean.total, r.series.mean.localization,
                  r.series.mean.cardinality, r.series.max.total, r.series.max.localization,
                  r.series.max.cardinality);
    io::write_file_atomic(cfg.output_dir / "ospa_summary.txt", buf);
    log << buf;
    return r;
}

inline std::string describe_axis(const char* axis, const stats::KsResult& ks, double alpha) {
    char buf[256];
    if (ks.skipped) {
        std::snprintf(buf, sizeof buf, "%s: mean=%.4f sd=%.4f; zero-variance sample, test skipped\n", axis, ks.mean,
                      ks.sd);
    } else {
        std::snprintf(buf, sizeof buf, "%s: mean=%.4f sd=%.4f ks_d=%.4f p_value=%.4f H0=%s\n", axis, ks.mean, ks.sd,
                      ks.statistic, ks.p_value, ks.reject(alpha) ? "reject" : "accept");
    }
    return buf;
}

inline constexpr double normality_alpha = 0.05;

/// Acceleration normality analysis of a truth/tracks file. Writes
/// accelerations.csv, normal_qq.csv and normality.txt.
inline AccelerationReport run_analyze(const fs::path& tracks_path, const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto points = io::read_track_points(tracks_path);
    AccelerationReport report = analyze_accelerations(points, cfg.model.sampling_interval);
    for (const auto& w : report.warnings) log << "warning: " << w << "\n";

    io::write_accelerations(cfg.output_dir / "accelerations.csv", report.samples);
    io::write_normal_qq(cfg.output_dir / "normal_qq.csv", report.qq_x, report.qq_y);

    std::string summary = "acceleration samples: m=" + std::to_string(report.samples.size()) + "\n";
    summary += describe_axis("x", report.x, normality_alpha);
    summary += describe_axis("y", report.y, normality_alpha);
    summary +=
        "alpha=0.05; one-sample Kolmogorov-Smirnov against N(sample mean, sample sd), asymptotic p-values "
        "(parameters estimated from the sample, no Lilliefors correction)\n";
    io::write_file_atomic(cfg.output_dir / "normality.txt", summary);
    log << summary;
    return report;
}

}  // namespace gmcphd::commands
