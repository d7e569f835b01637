#pragma once

#include "mdcrow/chem/structure.hpp"

#include <utility>
#include <vector>

namespace mdcrow::chem {

using Bond = std::pair<std::size_t, std::size_t>;

// Covalent bonds by distance: d < r_cov(i) + r_cov(j) + tolerance. Water
// H-H pairs are not bonds.
std::vector<Bond> perceive_bonds(const Structure& s, double tolerance = 0.45);

std::vector<std::vector<std::size_t>> adjacency(std::size_t n_atoms, const std::vector<Bond>& bonds);

} // namespace mdcrow::chem
