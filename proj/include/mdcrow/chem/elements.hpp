#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace mdcrow::chem {

struct ElementInfo {
    std::string_view symbol;
    double mass;              // amu
    double covalent_radius;   // Å
    std::optional<double> vdw_radius;  // Bondi, Å; absent when Bondi gives none
    std::array<unsigned char, 3> color;
};

// Case-insensitive lookup ("FE", "Fe", "fe").
const ElementInfo* find_element(std::string_view symbol);

// Throws NotFoundError naming the element.
const ElementInfo& element(std::string_view symbol);
double element_mass(std::string_view symbol);
double vdw_radius(std::string_view symbol);

// Guesses an element from a PDB atom name when columns 77-78 are blank.
std::string element_from_atom_name(std::string_view atom_name, std::string_view residue_name);

} // namespace mdcrow::chem
