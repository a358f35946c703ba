#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gmcphd/models.hpp"
#include "gmcphd/random.hpp"

namespace gmcphd::sim {

/// Distribution of the per-axis acceleration noise ξ. `uniform` draws from
/// U(-√3σ, √3σ), which has the same variance σ² as the Gaussian option.
enum class AccelerationNoise { gaussian, uniform };

/// One object: alive for birth_step <= t < death_step.
struct BirthEvent {
    long birth_step;
    Vector initial_state;  // [p_x, v_x, p_y, v_y] at birth_step
    long death_step;
};

struct ScenarioSpec {
    long duration = 100;
    std::vector<BirthEvent> birth_events;
    CVModelParams motion;  // dynamics and measurement noise of the ground truth
    double detection_probability = defaults::detection_probability;
    std::uint64_t seed = 0;
    AccelerationNoise noise = AccelerationNoise::gaussian;

    void validate() const {
        if (duration < 1) throw ConfigError("scenario duration must be >= 1");
        motion.validate();
        if (!(detection_probability >= 0.0 && detection_probability <= 1.0)) {
            throw ConfigError("detection probability must lie in [0, 1]");
        }
        for (std::size_t k = 0; k < birth_events.size(); ++k) {
            const auto& e = birth_events[k];
            if (!(0 <= e.birth_step && e.birth_step < e.death_step && e.death_step <= duration)) {
                throw ConfigError("birth event " + std::to_string(k) +
                                  " violates 0 <= birth < death <= duration");
            }
            if (e.initial_state.size() != 4) {
                throw ConfigError("birth event " + std::to_string(k) + " initial state must have 4 entries");
            }
        }
    }
};

struct TruthPoint {
    long track_id;
    Vector state;
};

struct GroundTruth {
    std::vector<std::vector<TruthPoint>> steps;  // indexed by time

    std::vector<std::size_t> cardinality() const {
        std::vector<std::size_t> n;
        n.reserve(steps.size());
        for (const auto& s : steps) n.push_back(s.size());
        return n;
    }
};

struct DetectionFrame {
    long time_index;
    std::vector<Vector> measurements;  // unordered (p_x, p_y), µm
};

struct Scenario {
    GroundTruth truth;
    std::vector<DetectionFrame> detections;
};

/// Substream ids. Track k uses track_stream_base + k.
namespace stream_id {
inline constexpr std::uint64_t detection = 1;
inline constexpr std::uint64_t measurement_noise = 2;
inline constexpr std::uint64_t shuffle = 3;
inline constexpr std::uint64_t track_stream_base = 1000;
}  // namespace stream_id

/// Samples trajectories under x_t = F x_{t-1} + G ξ and emits detections
/// z = H x + N(0, σ_o² I) for each alive object with probability p_D.
/// Measurement order within a frame is shuffled.
inline Scenario generate(const ScenarioSpec& spec) {
    spec.validate();
    const double dt = spec.motion.sampling_interval;
    const Matrix f = cv_transition(dt);
    const Matrix g = cv_noise_gain(dt);
    const double sigma[2] = {spec.motion.sigma_x, spec.motion.sigma_y};

    Scenario out;
    out.truth.steps.resize(static_cast<std::size_t>(spec.duration));
    for (std::size_t k = 0; k < spec.birth_events.size(); ++k) {
        const auto& e = spec.birth_events[k];
        rng::Stream stream(spec.seed, stream_id::track_stream_base + k);
        Vector x = e.initial_state;
        for (long t = e.birth_step; t < e.death_step; ++t) {
            if (t > e.birth_step) {
                Eigen::Vector2d xi;
                for (int axis = 0; axis < 2; ++axis) {
                    xi(axis) = spec.noise == AccelerationNoise::gaussian
                                   ? sigma[axis] * stream.normal()
                                   : stream.uniform(-std::sqrt(3.0) * sigma[axis], std::sqrt(3.0) * sigma[axis]);
                }
                x = f * x + g * xi;
            }
            out.truth.steps[static_cast<std::size_t>(t)].push_back(TruthPoint{static_cast<long>(k), x});
        }
    }

    rng::Stream detect(spec.seed, stream_id::detection);
    rng::Stream noise(spec.seed, stream_id::measurement_noise);
    rng::Stream shuffle(spec.seed, stream_id::shuffle);
    const double sigma_o = spec.motion.sigma_obs;
    out.detections.reserve(out.truth.steps.size());
    for (long t = 0; t < spec.duration; ++t) {
        DetectionFrame frame{t, {}};
        for (const auto& p : out.truth.steps[static_cast<std::size_t>(t)]) {
            if (!detect.bernoulli(spec.detection_probability)) continue;
            Vector z(2);
            z(0) = p.state(0) + sigma_o * noise.normal();
            z(1) = p.state(2) + sigma_o * noise.normal();
            frame.measurements.push_back(std::move(z));
        }
        shuffle.shuffle(frame.measurements);
        out.detections.push_back(std::move(frame));
    }
    return out;
}

/// Nominal (noise-free) state of a birth event at step t.
inline Vector nominal_state(const BirthEvent& e, long t, double dt) {
    Vector x = e.initial_state;
    const double elapsed = static_cast<double>(t - e.birth_step) * dt;
    x(0) += elapsed * x(1);
    x(2) += elapsed * x(3);
    return x;
}

/// Fixed 12-object, 100-step schedule for organelle-style tracking.
///
/// Births fall in [0, 30) near the four birth sites; all early objects are
/// gone by step 22, leaving an empty interval 22..25 before the late group
/// appears. Late objects die in [80, 100] or survive to the end. Speeds are
/// at most 3.7 µm/s, and two pairs cross head-on in y (objects 5/7 meet at
/// (3.5, -0.5) on step 31, objects 9/10 at (-3.5, 3) on step 40). Ground
/// truth uses weak acceleration noise (0.05 µm/s²) so trajectories stay
/// near-linear and below 7 µm/s.
inline ScenarioSpec reference_scenario(std::uint64_t seed) {
    struct Row {
        long birth;
        long death;
        double px, vx, py, vy;
    };
    const Row rows[] = {
        {0, 14, 3.4, 1.0, 5.3, 2.0},
        {0, 22, 4.3, -1.5, -5.6, -2.0},
        {3, 22, -3.2, -2.0, -1.6, 1.0},
        {8, 18, -3.6, 1.0, 7.7, 3.0},
        {12, 22, 2.7, 2.0, 4.6, -1.0},
        {26, 100, 3.0, 0.1, 5.0, -1.1},
        {26, 90, -3.3, -2.0, -2.4, -3.0},
        {27, 100, 4.0, -0.125, -6.0, 1.375},
        {27, 85, -4.3, 3.0, 8.4, 1.0},
        {28, 100, -3.0, -0.5 / 12.0, -2.0, 5.0 / 12.0},
        {29, 95, -4.0, 0.5 / 11.0, 8.0, -5.0 / 11.0},
        {29, 82, 3.6, 2.5, 5.5, 0.5},
    };
    ScenarioSpec spec;
    spec.duration = 100;
    spec.motion = CVModelParams{1.0, 0.05, 0.05, 0.2};
    spec.seed = seed;
    for (const auto& r : rows) {
        Vector x(4);
        x << r.px, r.vx, r.py, r.vy;
        spec.birth_events.push_back(BirthEvent{r.birth, std::move(x), r.death});
    }
    return spec;
}

/// Scheduled intervals (inclusive) where no object is alive, excluding the
/// leading/trailing stretches of the scenario.
inline std::vector<std::pair<long, long>> empty_intervals(const ScenarioSpec& spec) {
    std::vector<int> alive(static_cast<std::size_t>(spec.duration), 0);
    for (const auto& e : spec.birth_events) {
        for (long t = e.birth_step; t < e.death_step; ++t) ++alive[static_cast<std::size_t>(t)];
    }
    std::vector<std::pair<long, long>> out;
    long t = 0;
    while (t < spec.duration && alive[static_cast<std::size_t>(t)] == 0) ++t;
    while (t < spec.duration) {
        if (alive[static_cast<std::size_t>(t)] == 0) {
            long end = t;
            while (end + 1 < spec.duration && alive[static_cast<std::size_t>(end + 1)] == 0) ++end;
            if (end + 1 < spec.duration) out.emplace_back(t, end);
            t = end + 1;
        } else {
            ++t;
        }
    }
    return out;
}

}  // namespace gmcphd::sim
