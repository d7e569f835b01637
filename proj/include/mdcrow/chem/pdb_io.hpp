#pragma once

#include "mdcrow/chem/structure.hpp"

#include <string>
#include <string_view>

namespace mdcrow::chem {

// Fixed-column PDB. Only the first MODEL is read; CRYST1 sets the box.
Structure parse_pdb(std::string_view text);
Structure read_pdb(const std::string& path);

std::string write_pdb(const Structure& s);
void save_pdb(const Structure& s, const std::string& path);

} // namespace mdcrow::chem
