#pragma once

#include "mdcrow/sim/trajectory.hpp"

#include <vector>

namespace mdcrow::analysis {

struct RdfResult {
    std::vector<double> edges;    // n_bins + 1
    std::vector<double> centers;
    std::vector<double> g;
    std::vector<double> counts;   // summed over frames and reference atoms
    double density = 0.0;         // mean partner density per reference atom, Å^-3
    std::size_t n_frames = 0;
    std::size_t n_reference = 0;
};

/// Pair-distance histogram under the minimum-image convention, normalized
/// by the ideal-gas shell count. Self pairs are excluded.
RdfResult rdf(const sim::Trajectory& traj, const std::vector<std::size_t>& sel_a,
              const std::vector<std::size_t>& sel_b, double r_max, int n_bins);

} // namespace mdcrow::analysis
