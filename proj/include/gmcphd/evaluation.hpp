#pragma once

#include <vector>

#include "gmcphd/cphd.hpp"
#include "gmcphd/ospa.hpp"
#include "gmcphd/sim.hpp"

namespace gmcphd {

inline std::vector<std::vector<Vector>> truth_positions(const sim::GroundTruth& truth) {
    std::vector<std::vector<Vector>> out(truth.steps.size());
    for (std::size_t t = 0; t < truth.steps.size(); ++t) {
        for (const auto& p : truth.steps[t]) out[t].push_back(position_of(p.state));
    }
    return out;
}

inline std::vector<std::vector<Vector>> estimate_positions(const std::vector<Extraction>& extractions) {
    std::vector<std::vector<Vector>> out(extractions.size());
    for (std::size_t t = 0; t < extractions.size(); ++t) {
        for (const auto& e : extractions[t].estimates) out[t].push_back(position_of(e.state));
    }
    return out;
}

/// OSPA per step between ground truth and filter extractions, compared in
/// position space.
inline OspaSeries ospa_series(const sim::GroundTruth& truth, const std::vector<Extraction>& extractions,
                              const OspaParams& params) {
    const auto x = truth_positions(truth);
    const auto y = estimate_positions(extractions);
    return ospa_series(std::span<const std::vector<Vector>>(x), std::span<const std::vector<Vector>>(y), params);
}

}  // namespace gmcphd
