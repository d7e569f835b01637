#include "mdcrow/chem/bonds.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/chem/residues.hpp"

#include <cmath>
#include <unordered_map>

namespace mdcrow::chem {

std::vector<Bond> perceive_bonds(const Structure& s, double tolerance) {
    std::vector<Bond> bonds;
    const size_t n = s.atoms.size();
    if (n < 2) return bonds;

    std::vector<double> radius(n);
    double max_r = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const auto* e = find_element(s.atoms[i].element);
        radius[i] = e ? e->covalent_radius : 0.77;
        max_r = std::max(max_r, radius[i]);
    }
    const double cell = 2.0 * max_r + tolerance;

    auto key = [cell](const Eigen::Vector3d& p) {
        return Eigen::Vector3i(static_cast<int>(std::floor(p.x() / cell)),
                               static_cast<int>(std::floor(p.y() / cell)),
                               static_cast<int>(std::floor(p.z() / cell)));
    };
    auto hash = [](const Eigen::Vector3i& k) {
        return (static_cast<long long>(k.x()) * 73856093LL) ^ (static_cast<long long>(k.y()) * 19349663LL) ^
               (static_cast<long long>(k.z()) * 83492791LL);
    };
    std::unordered_map<long long, std::vector<size_t>> grid;
    std::vector<Eigen::Vector3i> keys(n);
    for (size_t i = 0; i < n; ++i) {
        keys[i] = key(s.atoms[i].pos);
        grid[hash(keys[i])].push_back(i);
    }
    for (size_t i = 0; i < n; ++i) {
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    const Eigen::Vector3i k = keys[i] + Eigen::Vector3i(dx, dy, dz);
                    auto it = grid.find(hash(k));
                    if (it == grid.end()) continue;
                    for (size_t j : it->second) {
                        if (j <= i || keys[j] != k) continue;
                        const auto& ai = s.atoms[i];
                        const auto& aj = s.atoms[j];
                        if (ai.element == "H" && aj.element == "H") continue;
                        const double d = (ai.pos - aj.pos).norm();
                        if (d > 0.4 && d < radius[i] + radius[j] + tolerance) bonds.emplace_back(i, j);
                    }
                }
    }
    std::sort(bonds.begin(), bonds.end());
    return bonds;
}

std::vector<std::vector<std::size_t>> adjacency(std::size_t n_atoms, const std::vector<Bond>& bonds) {
    std::vector<std::vector<std::size_t>> adj(n_atoms);
    for (auto [i, j] : bonds) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    return adj;
}

} // namespace mdcrow::chem
