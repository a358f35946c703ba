#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gmcphd/acceleration.hpp"
#include "gmcphd/error.hpp"
#include "gmcphd/ospa.hpp"
#include "gmcphd/sim.hpp"

namespace gmcphd::io {

// Column layouts. Units: µm, µm/s, µm/s².
inline constexpr std::string_view detections_header = "time_index,p_x_um,p_y_um";
inline constexpr std::string_view track_header = "track_id,time_index,p_x_um,v_x_um_s,p_y_um,v_y_um_s";
inline constexpr std::string_view cardinality_header = "step,map_n,expected_n";
inline constexpr std::string_view ospa_header = "step,total,localization,cardinality_err";
inline constexpr std::string_view acceleration_header = "track_id,time_index,a_x_um_s2,a_y_um_s2";
inline constexpr std::string_view qq_header = "axis,rank,sample,normal_quantile";

/// Reals are written with 9 significant digits (%.9g).
inline std::string format_real(double x) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

/// Writes via a temporary sibling file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out.flush()) throw DataError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

namespace detail {

inline std::string where(const std::string& source, std::size_t line_no) {
    return source + ":" + std::to_string(line_no);
}

inline double parse_real(std::string_view field, const std::string& source, std::size_t line_no,
                         std::string_view column) {
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw DataError(where(source, line_no) + ": field '" + std::string(column) + "' is not a finite number: '" +
                        std::string(field) + "'");
    }
    return v;
}

inline long parse_integer(std::string_view field, const std::string& source, std::size_t line_no,
                          std::string_view column) {
    long v = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end) {
        throw DataError(where(source, line_no) + ": field '" + std::string(column) + "' is not an integer: '" +
                        std::string(field) + "'");
    }
    return v;
}

inline std::string_view trim_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

// Reads all non-empty lines after checking the header.
inline std::vector<std::pair<std::size_t, std::string>> read_body(const std::filesystem::path& path,
                                                                  std::string_view header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim_cr(line) != header) {
        throw DataError(path.string() + ":1: expected header '" + std::string(header) + "'");
    }
    std::vector<std::pair<std::size_t, std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = trim_cr(line);
        if (view.empty()) continue;
        rows.emplace_back(line_no, std::string(view));
    }
    return rows;
}

}  // namespace detail

/// One row per measurement; a frame without measurements is a single row
/// with empty coordinate fields ("t,,"), so the sequence of frames is gapless.
inline std::string format_detections(const std::vector<sim::DetectionFrame>& frames) {
    std::string out(detections_header);
    out += '\n';
    for (const auto& f : frames) {
        const std::string t = std::to_string(f.time_index);
        if (f.measurements.empty()) {
            out += t + ",,\n";
            continue;
        }
        for (const auto& z : f.measurements) out += t + ',' + format_real(z(0)) + ',' + format_real(z(1)) + '\n';
    }
    return out;
}

inline void write_detections(const std::filesystem::path& path, const std::vector<sim::DetectionFrame>& frames) {
    write_file_atomic(path, format_detections(frames));
}

/// Reads detections; time indices must be non-decreasing and gapless.
/// Every offending frame is listed in the error.
inline std::vector<sim::DetectionFrame> read_detections(const std::filesystem::path& path) {
    const std::string src = path.string();
    std::vector<sim::DetectionFrame> frames;
    std::vector<bool> sentinel;
    std::vector<std::string> problems;
    for (const auto& [line_no, text] : detail::read_body(path, detections_header)) {
        const auto f = split_fields(text);
        if (f.size() != 3) {
            throw DataError(detail::where(src, line_no) + ": expected 3 fields, found " + std::to_string(f.size()));
        }
        const long t = detail::parse_integer(f[0], src, line_no, "time_index");
        const bool empty_frame = f[1].empty() && f[2].empty();

        if (frames.empty() || t != frames.back().time_index) {
            if (!frames.empty()) {
                const long prev = frames.back().time_index;
                if (t < prev) {
                    problems.push_back("frame " + std::to_string(t) + " (line " + std::to_string(line_no) +
                                       ") appears after frame " + std::to_string(prev));
                } else if (t > prev + 1) {
                    problems.push_back("frames " + std::to_string(prev + 1) + ".." + std::to_string(t - 1) +
                                       " missing before line " + std::to_string(line_no));
                }
            }
            frames.push_back({t, {}});
            sentinel.push_back(empty_frame);
        } else if (empty_frame || sentinel.back()) {
            problems.push_back("frame " + std::to_string(t) + " mixes an empty-frame row with measurements (line " +
                               std::to_string(line_no) + ")");
        }
        if (!empty_frame) {
            Vector z(2);
            z(0) = detail::parse_real(f[1], src, line_no, "p_x_um");
            z(1) = detail::parse_real(f[2], src, line_no, "p_y_um");
            frames.back().measurements.push_back(std::move(z));
        }
    }
    if (!problems.empty()) {
        std::string msg = src + ": time indices must be sorted and gapless:";
        for (const auto& p : problems) msg += "\n  " + p;
        throw DataError(msg);
    }
    return frames;
}

inline std::string format_track_points(const std::vector<TrackPoint>& points) {
    std::string out(track_header);
    out += '\n';
    for (const auto& p : points) {
        out += std::to_string(p.track_id) + ',' + std::to_string(p.time_index) + ',' + format_real(p.p_x) + ',' +
               format_real(p.v_x) + ',' + format_real(p.p_y) + ',' + format_real(p.v_y) + '\n';
    }
    return out;
}

inline void write_track_points(const std::filesystem::path& path, const std::vector<TrackPoint>& points) {
    write_file_atomic(path, format_track_points(points));
}

/// Reads truth.csv / tracks.csv; (track_id, time_index) must be unique.
inline std::vector<TrackPoint> read_track_points(const std::filesystem::path& path) {
    const std::string src = path.string();
    std::vector<TrackPoint> points;
    std::set<std::pair<long, long>> seen;
    for (const auto& [line_no, text] : detail::read_body(path, track_header)) {
        const auto f = split_fields(text);
        if (f.size() != 6) {
            throw DataError(detail::where(src, line_no) + ": expected 6 fields, found " + std::to_string(f.size()));
        }
        TrackPoint p{detail::parse_integer(f[0], src, line_no, "track_id"),
                     detail::parse_integer(f[1], src, line_no, "time_index"),
                     detail::parse_real(f[2], src, line_no, "p_x_um"),
                     detail::parse_real(f[3], src, line_no, "v_x_um_s"),
                     detail::parse_real(f[4], src, line_no, "p_y_um"),
                     detail::parse_real(f[5], src, line_no, "v_y_um_s")};
        if (!seen.emplace(p.track_id, p.time_index).second) {
            throw DataError(detail::where(src, line_no) + ": duplicate row for track " + std::to_string(p.track_id) +
                            " at time " + std::to_string(p.time_index));
        }
        points.push_back(p);
    }
    return points;
}

/// Ground truth rows, ordered by track then time.
inline std::vector<TrackPoint> truth_points(const sim::GroundTruth& truth) {
    std::vector<TrackPoint> points;
    for (std::size_t t = 0; t < truth.steps.size(); ++t) {
        for (const auto& p : truth.steps[t]) {
            points.push_back({p.track_id, static_cast<long>(t), p.state(0), p.state(1), p.state(2), p.state(3)});
        }
    }
    std::stable_sort(points.begin(), points.end(), [](const TrackPoint& a, const TrackPoint& b) {
        return a.track_id < b.track_id;
    });
    return points;
}

struct CardinalityRow {
    long step;
    std::size_t map_n;
    double expected_n;
};

inline void write_cardinality(const std::filesystem::path& path, const std::vector<CardinalityRow>& rows) {
    std::string out(cardinality_header);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.step) + ',' + std::to_string(r.map_n) + ',' + format_real(r.expected_n) + '\n';
    }
    write_file_atomic(path, out);
}

inline void write_ospa(const std::filesystem::path& path, long first_step, const OspaSeries& series) {
    std::string out(ospa_header);
    out += '\n';
    for (std::size_t k = 0; k < series.per_step.size(); ++k) {
        const auto& r = series.per_step[k];
        out += std::to_string(first_step + static_cast<long>(k)) + ',' + format_real(r.total) + ',' +
               format_real(r.localization) + ',' + format_real(r.cardinality) + '\n';
    }
    write_file_atomic(path, out);
}

struct OspaRow {
    long step;
    OspaResult result;
};

inline std::vector<OspaRow> read_ospa(const std::filesystem::path& path) {
    const std::string src = path.string();
    std::vector<OspaRow> rows;
    for (const auto& [line_no, text] : detail::read_body(path, ospa_header)) {
        const auto f = split_fields(text);
        if (f.size() != 4) throw DataError(detail::where(src, line_no) + ": expected 4 fields");
        rows.push_back({detail::parse_integer(f[0], src, line_no, "step"),
                        {detail::parse_real(f[1], src, line_no, "total"),
                         detail::parse_real(f[2], src, line_no, "localization"),
                         detail::parse_real(f[3], src, line_no, "cardinality_err")}});
    }
    return rows;
}

inline void write_accelerations(const std::filesystem::path& path, const std::vector<AccelerationSample>& samples) {
    std::string out(acceleration_header);
    out += '\n';
    for (const auto& s : samples) {
        out += std::to_string(s.track_id) + ',' + std::to_string(s.time_index) + ',' + format_real(s.a_x) + ',' +
               format_real(s.a_y) + '\n';
    }
    write_file_atomic(path, out);
}

inline void write_normal_qq(const std::filesystem::path& path, const std::vector<QuantilePoint>& qq_x,
                            const std::vector<QuantilePoint>& qq_y) {
    std::string out(qq_header);
    out += '\n';
    auto emit = [&](const char* axis, const std::vector<QuantilePoint>& qq) {
        for (std::size_t i = 0; i < qq.size(); ++i) {
            out += std::string(axis) + ',' + std::to_string(i + 1) + ',' + format_real(qq[i].sample) + ',' +
                   format_real(qq[i].normal_quantile) + '\n';
        }
    };
    emit("x", qq_x);
    emit("y", qq_y);
    write_file_atomic(path, out);
}

}  // namespace gmcphd::io
