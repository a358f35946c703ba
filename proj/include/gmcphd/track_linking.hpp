#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>
#include <vector>

#include "gmcphd/cphd.hpp"

namespace gmcphd {

struct TimedEstimates {
    long time_index;
    std::vector<Estimate> estimates;
};

struct Track {
    long id;
    long start_time;
    std::vector<Estimate> points;  // one per consecutive step from start_time

    long end_time() const { return start_time + static_cast<long>(points.size()) - 1; }
};

/// Default association gate: 3 σ_o plus the largest plausible displacement
/// in one step (7 µm/s).
inline double default_link_gate(double sigma_obs, double sampling_interval) {
    return 3.0 * sigma_obs + 7.0 * sampling_interval;
}

/// Greedy nearest-neighbour linking of per-frame estimates in position space.
///
/// Candidate pairs (live track, estimate) within the gate are taken in order
/// of increasing distance. An estimate left over starts a new track; a track
/// left over (or any track when frames are not consecutive) ends. Crossing
/// objects can swap labels.
inline std::vector<Track> link_tracks(const std::vector<TimedEstimates>& frames, double gate,
                                      std::array<Eigen::Index, 2> position_index = {0, 2}) {
    if (!(gate > 0.0)) throw ConfigError("link gate must be > 0");
    std::vector<Track> tracks;
    std::vector<std::size_t> live;  // indices into tracks
    long previous_time = 0;
    bool first = true;

    auto distance = [&](const Vector& a, const Vector& b) {
        const double dx = a(position_index[0]) - b(position_index[0]);
        const double dy = a(position_index[1]) - b(position_index[1]);
        return std::hypot(dx, dy);
    };

    for (const auto& frame : frames) {
        if (!first && frame.time_index != previous_time + 1) live.clear();
        first = false;
        previous_time = frame.time_index;

        std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
        for (std::size_t a = 0; a < live.size(); ++a) {
            const Vector& head = tracks[live[a]].points.back().state;
            for (std::size_t b = 0; b < frame.estimates.size(); ++b) {
                const double d = distance(head, frame.estimates[b].state);
                if (d <= gate) candidates.emplace_back(d, a, b);
            }
        }
        std::sort(candidates.begin(), candidates.end());

        std::vector<char> track_used(live.size(), 0);
        std::vector<char> estimate_used(frame.estimates.size(), 0);
        std::vector<std::size_t> next_live;
        for (const auto& [d, a, b] : candidates) {
            if (track_used[a] || estimate_used[b]) continue;
            track_used[a] = estimate_used[b] = 1;
            tracks[live[a]].points.push_back(frame.estimates[b]);
            next_live.push_back(live[a]);
        }
        for (std::size_t b = 0; b < frame.estimates.size(); ++b) {
            if (estimate_used[b]) continue;
            tracks.push_back(Track{static_cast<long>(tracks.size()), frame.time_index, {frame.estimates[b]}});
            next_live.push_back(tracks.size() - 1);
        }
        std::sort(next_live.begin(), next_live.end());
        live = std::move(next_live);
    }
    return tracks;
}

}  // namespace gmcphd
