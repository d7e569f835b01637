#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/sim/trajectory.hpp"

#include <string>
#include <vector>

namespace mdcrow::analysis {

struct SecondaryStructure {
    std::vector<chem::ResidueKey> residues;  // protein residues, in order
    std::string classes;                     // one of H, E, C per residue
    int helix = 0;
    int strand = 0;
    int coil = 0;
    std::vector<std::string> warnings;
};

// Hydrogen-bond energy of the Kabsch-Sander electrostatic model, kcal/mol.
double hbond_energy(const Eigen::Vector3d& n, const Eigen::Vector3d& h, const Eigen::Vector3d& c,
                    const Eigen::Vector3d& o);

/// Three-state assignment: H from consecutive i -> i+4 turns, E from
/// parallel/antiparallel bridges, C otherwise.
SecondaryStructure secondary_structure(const chem::Structure& s);

std::vector<SecondaryStructure> secondary_structure(const sim::Trajectory& traj);

} // namespace mdcrow::analysis
