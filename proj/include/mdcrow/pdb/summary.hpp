#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/image/raster.hpp"

#include <map>
#include <string>
#include <vector>

namespace mdcrow::pdb {

struct ChainSummary {
    char id = 'A';
    std::size_t residues = 0;
    std::size_t atoms = 0;
    std::string sequence;  // one-letter, protein residues only
    friend bool operator==(const ChainSummary&, const ChainSummary&) = default;
};

struct StructureSummary {
    std::size_t atoms = 0;
    std::size_t heavy_atoms = 0;
    std::size_t hydrogens = 0;
    std::size_t residues = 0;
    std::size_t chains = 0;
    std::size_t protein_residues = 0;
    std::size_t waters = 0;
    std::size_t ions = 0;
    std::size_t solvent_molecules = 0;
    std::size_t heterogen_residues = 0;
    std::map<std::string, std::size_t> heterogens;  // residue name -> count
    std::vector<ChainSummary> chain_details;
    friend bool operator==(const StructureSummary&, const StructureSummary&) = default;
};

StructureSummary summarize_structure(const chem::Structure& s);

// Starts with "atoms: N, residues: R, chains: C".
std::string format_summary(const StructureSummary& summary);

/// Orthographic view along the third principal axis; atoms drawn as
/// element-coloured discs, far atoms first.
image::Image render_structure(const chem::Structure& s, int width = 480, int height = 480);

} // namespace mdcrow::pdb
