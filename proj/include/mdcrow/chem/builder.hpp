#pragma once

#include "mdcrow/chem/structure.hpp"

#include <string_view>
#include <vector>

namespace mdcrow::chem {

struct BackboneAngles {
    double phi = -57.0;
    double psi = -47.0;
    double omega = 180.0;
};

/// Builds an all-heavy-atom polypeptide from a one-letter sequence using
/// idealized bond geometry. `angles` is either empty (alpha helix) or has
/// one entry per residue.
Structure build_peptide(std::string_view sequence, const std::vector<BackboneAngles>& angles,
                        char chain = 'A', int first_seq = 1);

// Ideal right-handed alpha helix, the secondary-structure reference.
Structure build_ideal_helix(std::size_t n_residues);

} // namespace mdcrow::chem
