#pragma once

#include "mdcrow/chem/structure.hpp"

#include <string>
#include <vector>

namespace mdcrow::pdb {

struct CleanSpec {
    double target_ph = 7.0;
    bool add_hydrogens = true;
    bool add_missing_heavy_atoms = true;
    bool remove_heterogens = true;
    bool keep_water = false;
};

void validate(const CleanSpec& spec);

struct CleanResult {
    chem::Structure structure;
    std::vector<std::string> warnings;
    std::size_t removed_atoms = 0;
    std::size_t added_heavy_atoms = 0;
    std::size_t added_hydrogens = 0;
};

/// Heterogen removal, then missing heavy atoms from residue templates, then
/// hydrogens (existing ones on protein and water are rebuilt). Heavy atoms
/// are never moved.
CleanResult clean_structure(const chem::Structure& s, const CleanSpec& spec);

// Individual passes.
chem::Structure remove_heterogens(const chem::Structure& s, bool keep_water);
chem::Structure add_missing_heavy_atoms(const chem::Structure& s, std::vector<std::string>& warnings);
chem::Structure add_hydrogens(const chem::Structure& s, double ph);

} // namespace mdcrow::pdb
