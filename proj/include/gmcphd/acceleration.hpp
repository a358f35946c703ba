#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "gmcphd/ks_test.hpp"

namespace gmcphd {

/// One row of a truth/tracks file.
struct TrackPoint {
    long track_id;
    long time_index;
    double p_x, v_x, p_y, v_y;
    double weight = 1.0;  // mixture weight for filter output; not persisted
};

struct AccelerationSample {
    long track_id;
    long time_index;  // centre step of the second difference
    double a_x;
    double a_y;
};

struct QuantilePoint {
    double sample;
    double normal_quantile;
};

struct AccelerationReport {
    std::vector<AccelerationSample> samples;
    stats::KsResult x;
    stats::KsResult y;
    std::vector<QuantilePoint> qq_x;
    std::vector<QuantilePoint> qq_y;
    std::vector<std::string> warnings;
};

/// Normal probability plot data: sorted sample against N(mean, sd) quantiles
/// at plotting positions (i - 0.5) / n.
inline std::vector<QuantilePoint> normal_qq(std::vector<double> sample, double mean, double sd) {
    std::sort(sample.begin(), sample.end());
    std::vector<QuantilePoint> out;
    out.reserve(sample.size());
    const double n = static_cast<double>(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / n;
        out.push_back({sample[i], stats::normal_quantile(p, mean, sd > 0.0 ? sd : 1.0)});
    }
    return out;
}

/// Per-axis accelerations a_t = (p_{t+1} - 2 p_t + p_{t-1}) / Δ² from runs of
/// consecutive positions, pooled over tracks and tested for normality.
/// Tracks without three consecutive points are reported and skipped.
inline AccelerationReport analyze_accelerations(const std::vector<TrackPoint>& points, double sampling_interval) {
    std::map<long, std::vector<const TrackPoint*>> by_track;
    for (const auto& p : points) by_track[p.track_id].push_back(&p);

    AccelerationReport report;
    const double dt2 = sampling_interval * sampling_interval;
    for (auto& [id, rows] : by_track) {
        std::sort(rows.begin(), rows.end(),
                  [](const TrackPoint* a, const TrackPoint* b) { return a->time_index < b->time_index; });
        std::size_t produced = 0;
        for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
            const auto* prev = rows[k - 1];
            const auto* cur = rows[k];
            const auto* next = rows[k + 1];
            if (cur->time_index != prev->time_index + 1 || next->time_index != cur->time_index + 1) continue;
            report.samples.push_back({id, cur->time_index, (next->p_x - 2.0 * cur->p_x + prev->p_x) / dt2,
                                      (next->p_y - 2.0 * cur->p_y + prev->p_y) / dt2});
            ++produced;
        }
        if (produced == 0) {
            report.warnings.push_back("track " + std::to_string(id) +
                                      " has fewer than 3 consecutive points; excluded");
        }
    }

    std::vector<double> ax, ay;
    ax.reserve(report.samples.size());
    ay.reserve(report.samples.size());
    for (const auto& s : report.samples) {
        ax.push_back(s.a_x);
        ay.push_back(s.a_y);
    }
    report.x = stats::ks_normality_test(ax);
    report.y = stats::ks_normality_test(ay);
    report.qq_x = normal_qq(ax, report.x.mean, report.x.sd);
    report.qq_y = normal_qq(ay, report.y.mean, report.y.sd);
    return report;
}

}  // namespace gmcphd
