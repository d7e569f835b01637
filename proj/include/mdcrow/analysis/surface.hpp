#pragma once

#include "mdcrow/chem/structure.hpp"

#include <Eigen/Core>

#include <vector>

namespace mdcrow::analysis {

// Deterministic golden-angle spiral of n unit vectors.
Eigen::Matrix3Xd sphere_points(int n);

struct SasaResult {
    std::vector<double> per_atom;                 // Å^2
    std::vector<chem::ResidueKey> residues;
    std::vector<std::string> residue_names;
    std::vector<double> per_residue;              // Å^2
    double total = 0.0;
};

/// Shrake-Rupley solvent-accessible surface area with Bondi radii.
SasaResult sasa(const chem::Structure& s, double probe_radius = 1.4, int n_points = 960);

} // namespace mdcrow::analysis
