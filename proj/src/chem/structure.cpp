#include "mdcrow/chem/structure.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/chem/residues.hpp"

#include <algorithm>

namespace mdcrow::chem {

std::string to_string(StructureSource s) {
    switch (s) {
        case StructureSource::fetched: return "fetched";
        case StructureSource::cleaned: return "cleaned";
        case StructureSource::solvated: return "solvated";
        case StructureSource::generated: return "generated";
    }
    return "fetched";
}

Eigen::Matrix3Xd Structure::coordinates() const {
    Eigen::Matrix3Xd xyz(3, static_cast<Eigen::Index>(atoms.size()));
    for (size_t i = 0; i < atoms.size(); ++i) xyz.col(static_cast<Eigen::Index>(i)) = atoms[i].pos;
    return xyz;
}

void Structure::set_coordinates(const Eigen::Matrix3Xd& xyz) {
    for (size_t i = 0; i < atoms.size(); ++i) atoms[i].pos = xyz.col(static_cast<Eigen::Index>(i));
}

std::optional<std::size_t> Residue::find(const Structure& s, std::string_view atom_name) const {
    for (auto i : atoms)
        if (s.atoms[i].name == atom_name) return i;
    return std::nullopt;
}

std::vector<Residue> residues(const Structure& s) {
    std::vector<Residue> out;
    for (size_t i = 0; i < s.atoms.size(); ++i) {
        const auto& a = s.atoms[i];
        ResidueKey key{a.chain, a.res_seq, a.icode};
        if (out.empty() || !(out.back().key == key) || out.back().name != a.res_name)
            out.push_back(Residue{key, a.res_name, {}});
        out.back().atoms.push_back(i);
    }
    return out;
}

std::vector<char> chain_ids(const Structure& s) {
    std::vector<char> ids;
    for (const auto& a : s.atoms)
        if (std::find(ids.begin(), ids.end(), a.chain) == ids.end()) ids.push_back(a.chain);
    return ids;
}

void renumber(Structure& s) {
    int serial = 1;
    for (auto& a : s.atoms) a.serial = serial++;
}

std::vector<double> masses(const Structure& s) {
    std::vector<double> m;
    m.reserve(s.atoms.size());
    for (const auto& a : s.atoms) {
        // united-atom methyl of the organic solvent templates
        if (a.name == "CM" && classify_residue(a.res_name) == ResidueKind::solvent)
            m.push_back(element_mass("C") + 3 * element_mass("H"));
        else
            m.push_back(element_mass(a.element));
    }
    return m;
}

} // namespace mdcrow::chem
