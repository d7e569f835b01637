#include "mdcrow/analysis/rdf.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mdcrow::analysis {

RdfResult rdf(const sim::Trajectory& traj, const std::vector<std::size_t>& sel_a,
              const std::vector<std::size_t>& sel_b, double r_max, int n_bins) {
    if (!traj.periodic || traj.boxes.size() != traj.n_frames())
        throw UsageError("RDF requires a periodic box in every frame");
    if (sel_a.empty()) throw UsageError("RDF selection A is empty");
    if (sel_b.empty()) throw UsageError("RDF selection B is empty");
    if (n_bins < 1) throw UsageError("RDF needs at least one bin");
    if (traj.n_frames() == 0) throw UsageError("trajectory has no frames");
    double min_edge = traj.boxes.front().minCoeff();
    for (const auto& b : traj.boxes) min_edge = std::min(min_edge, b.minCoeff());
    const double bound = 0.5 * min_edge;
    if (!(r_max > 0.0) || r_max > bound)
        throw UsageError("r_max=" + format_number(r_max) + " must be in (0, " + format_number(bound) +
                         "] (half the minimum box edge)");

    RdfResult out;
    out.n_frames = traj.n_frames();
    out.n_reference = sel_a.size();
    const double width = r_max / n_bins;
    for (int b = 0; b <= n_bins; ++b) out.edges.push_back(b * width);
    out.counts.assign(static_cast<size_t>(n_bins), 0.0);

    std::vector<char> in_b(traj.n_atoms(), 0);
    for (auto j : sel_b) in_b[j] = 1;
    double overlap = 0.0;
    for (auto i : sel_a) overlap += in_b[i];
    const double pairs_per_volume = static_cast<double>(sel_a.size()) * static_cast<double>(sel_b.size()) - overlap;

    const double r2max = r_max * r_max;
    double density_sum = 0.0;
    for (size_t f = 0; f < traj.n_frames(); ++f) {
        const auto& x = traj.frames[f];
        const Eigen::Vector3d box = traj.boxes[f];
        density_sum += pairs_per_volume / box.prod();
        for (auto i : sel_a) {
            const Eigen::Vector3d pi = x.col(static_cast<Eigen::Index>(i));
            for (auto j : sel_b) {
                if (j == i) continue;
                Eigen::Vector3d d = x.col(static_cast<Eigen::Index>(j)) - pi;
                for (int k = 0; k < 3; ++k) d(k) -= box(k) * std::round(d(k) / box(k));
                const double r2 = d.squaredNorm();
                if (r2 >= r2max) continue;
                const auto bin = std::min<size_t>(static_cast<size_t>(std::sqrt(r2) / width),
                                                  static_cast<size_t>(n_bins - 1));
                out.counts[bin] += 1.0;
            }
        }
    }
    out.density = density_sum / (static_cast<double>(traj.n_frames()) * static_cast<double>(sel_a.size()));
    const double norm = static_cast<double>(traj.n_frames()) * static_cast<double>(sel_a.size()) * out.density;
    for (int b = 0; b < n_bins; ++b) {
        const double r0 = out.edges[static_cast<size_t>(b)];
        const double r1 = out.edges[static_cast<size_t>(b) + 1];
        const double shell = 4.0 / 3.0 * std::numbers::pi * (r1 * r1 * r1 - r0 * r0 * r0);
        out.centers.push_back(0.5 * (r0 + r1));
        out.g.push_back(norm > 0 ? out.counts[static_cast<size_t>(b)] / (norm * shell) : 0.0);
    }
    return out;
}

} // namespace mdcrow::analysis
