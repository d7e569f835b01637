#include "mdcrow/analysis/surface.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/common/error.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace mdcrow::analysis {

Eigen::Matrix3Xd sphere_points(int n) {
    if (n < 1) throw UsageError("sphere point count must be positive");
    Eigen::Matrix3Xd pts(3, n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1.0 - (2.0 * k + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * k;
        pts.col(k) << r * std::cos(phi), r * std::sin(phi), z;
    }
    return pts;
}

SasaResult sasa(const chem::Structure& s, double probe_radius, int n_points) {
    SasaResult out;
    const size_t n = s.atoms.size();
    std::vector<double> radius(n);
    double max_r = 0.0;
    for (size_t i = 0; i < n; ++i) {
        radius[i] = chem::vdw_radius(s.atoms[i].element) + probe_radius;
        max_r = std::max(max_r, radius[i]);
    }
    const Eigen::Matrix3Xd unit = sphere_points(n_points);

    const double cell = 2.0 * max_r;
    auto cell_of = [cell](const Eigen::Vector3d& p) {
        return Eigen::Vector3i(static_cast<int>(std::floor(p.x() / cell)), static_cast<int>(std::floor(p.y() / cell)),
                               static_cast<int>(std::floor(p.z() / cell)));
    };
    auto hash = [](const Eigen::Vector3i& k) {
        return (static_cast<long long>(k.x()) * 73856093LL) ^ (static_cast<long long>(k.y()) * 19349663LL) ^
               (static_cast<long long>(k.z()) * 83492791LL);
    };
    std::unordered_map<long long, std::vector<size_t>> grid;
    std::vector<Eigen::Vector3i> cells(n);
    for (size_t i = 0; i < n; ++i) {
        cells[i] = cell_of(s.atoms[i].pos);
        grid[hash(cells[i])].push_back(i);
    }

    out.per_atom.assign(n, 0.0);
    std::vector<size_t> neighbors;
    for (size_t i = 0; i < n; ++i) {
        const Eigen::Vector3d& pi = s.atoms[i].pos;
        neighbors.clear();
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    const Eigen::Vector3i k = cells[i] + Eigen::Vector3i(dx, dy, dz);
                    auto it = grid.find(hash(k));
                    if (it == grid.end()) continue;
                    for (size_t j : it->second) {
                        if (j == i || cells[j] != k) continue;
                        const double reach = radius[i] + radius[j];
                        if ((s.atoms[j].pos - pi).squaredNorm() < reach * reach) neighbors.push_back(j);
                    }
                }
        int exposed = 0;
        size_t last_hit = 0;
        for (int p = 0; p < n_points; ++p) {
            const Eigen::Vector3d x = pi + radius[i] * unit.col(p);
            bool buried = false;
            // The previous occluder is the most likely one for the next point.
            if (last_hit < neighbors.size()) {
                const size_t j = neighbors[last_hit];
                buried = (x - s.atoms[j].pos).squaredNorm() < radius[j] * radius[j];
            }
            for (size_t q = 0; q < neighbors.size() && !buried; ++q) {
                const size_t j = neighbors[q];
                if ((x - s.atoms[j].pos).squaredNorm() < radius[j] * radius[j]) {
                    buried = true;
                    last_hit = q;
                }
            }
            if (!buried) ++exposed;
        }
        out.per_atom[i] = 4.0 * std::numbers::pi * radius[i] * radius[i] * exposed / n_points;
        out.total += out.per_atom[i];
    }

    for (const auto& res : chem::residues(s)) {
        double area = 0.0;
        for (auto i : res.atoms) area += out.per_atom[i];
        out.residues.push_back(res.key);
        out.residue_names.push_back(res.name);
        out.per_residue.push_back(area);
    }
    return out;
}

} // namespace mdcrow::analysis
