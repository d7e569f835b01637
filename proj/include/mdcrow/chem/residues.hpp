#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::chem {

enum class ResidueKind { protein, water, solvent, ion, heterogen };

ResidueKind classify_residue(std::string_view res_name);
bool is_amino_acid(std::string_view res_name);
bool is_water(std::string_view res_name);

// HID/HIE/HIP -> HIS, ASH -> ASP, ... ; other names pass through.
std::string canonical_residue(std::string_view res_name);

std::optional<std::string> three_letter(char one_letter);
char one_letter(std::string_view res_name);

// Side-chain pKa used by the protonation rule (protonate iff pH < pKa).
std::optional<double> side_chain_pka(std::string_view res_name);

/// Internal-coordinate recipe for one heavy atom of a residue template.
///
/// The atom is bonded to `c`; `b` and `a` complete the angle and dihedral.
/// A leading '-' names an atom of the previous residue.
struct AtomRecipe {
    std::string_view name;
    std::string_view element;
    std::string_view a, b, c;
    double bond;
    double angle;
    double dihedral;
};

// Ordered heavy-atom template of a standard amino acid (backbone N CA C O
// first). Empty for unknown residues.
std::span<const AtomRecipe> heavy_template(std::string_view res_name);

/// Hydrogens carried by one heavy atom at a given pH.
struct HydrogenSite {
    std::string_view heavy;
    int count;
    bool tetrahedral;
};

struct ProtonationContext {
    double ph = 7.0;
    bool n_terminal = false;
};

std::vector<HydrogenSite> hydrogen_sites(std::string_view res_name, const ProtonationContext& ctx);

} // namespace mdcrow::chem
