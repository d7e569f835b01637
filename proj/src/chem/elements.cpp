#include "mdcrow/chem/elements.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/chem/residues.hpp"

#include <cctype>

namespace mdcrow::chem {

namespace {

using RGB = std::array<unsigned char, 3>;
constexpr RGB kPink{255, 20, 147};

// Masses: IUPAC standard atomic weights. Covalent radii: Cordero et al.
// Van der Waals radii: Bondi (1964); entries without a Bondi value are empty.
const ElementInfo kElements[] = {
    {"H", 1.008, 0.31, 1.20, {255, 255, 255}},
    {"He", 4.0026, 0.28, 1.40, {217, 255, 255}},
    {"Li", 6.94, 1.28, 1.82, {204, 128, 255}},
    {"C", 12.011, 0.76, 1.70, {144, 144, 144}},
    {"N", 14.007, 0.71, 1.55, {48, 80, 248}},
    {"O", 15.999, 0.66, 1.52, {255, 13, 13}},
    {"F", 18.998, 0.57, 1.47, {144, 224, 80}},
    {"Ne", 20.180, 0.58, 1.54, {179, 227, 245}},
    {"Na", 22.990, 1.66, 2.27, {171, 92, 242}},
    {"Mg", 24.305, 1.41, 1.73, {138, 255, 0}},
    {"Si", 28.085, 1.11, 2.10, {240, 200, 160}},
    {"P", 30.974, 1.07, 1.80, {255, 128, 0}},
    {"S", 32.06, 1.05, 1.80, {255, 255, 48}},
    {"Cl", 35.45, 1.02, 1.75, {31, 240, 31}},
    {"Ar", 39.948, 1.06, 1.88, {128, 209, 227}},
    {"K", 39.098, 2.03, 2.75, {143, 64, 212}},
    {"Ca", 40.078, 1.76, std::nullopt, {61, 255, 0}},
    {"Mn", 54.938, 1.39, std::nullopt, {156, 122, 199}},
    {"Fe", 55.845, 1.32, std::nullopt, {224, 102, 51}},
    {"Co", 58.933, 1.26, std::nullopt, {240, 144, 160}},
    {"Ni", 58.693, 1.24, 1.63, {80, 208, 80}},
    {"Cu", 63.546, 1.32, 1.40, {200, 128, 51}},
    {"Zn", 65.38, 1.22, 1.39, {125, 128, 176}},
    {"Ga", 69.723, 1.22, 1.87, {194, 143, 143}},
    {"As", 74.922, 1.19, 1.85, {189, 128, 227}},
    {"Se", 78.971, 1.20, 1.90, {255, 161, 0}},
    {"Br", 79.904, 1.20, 1.85, {166, 41, 41}},
    {"Kr", 83.798, 1.16, 2.02, {92, 184, 209}},
    {"Pd", 106.42, 1.39, 1.63, {0, 105, 133}},
    {"Ag", 107.87, 1.45, 1.72, {192, 192, 192}},
    {"Cd", 112.41, 1.44, 1.58, {255, 217, 143}},
    {"In", 114.82, 1.42, 1.93, {166, 117, 115}},
    {"Sn", 118.71, 1.39, 2.17, {102, 128, 128}},
    {"Te", 127.60, 1.38, 2.06, {212, 122, 0}},
    {"I", 126.90, 1.39, 1.98, {148, 0, 148}},
    {"Xe", 131.29, 1.40, 2.16, {66, 158, 176}},
    {"Pt", 195.08, 1.36, 1.72, {208, 208, 224}},
    {"Au", 196.97, 1.36, 1.66, {255, 209, 35}},
    {"Hg", 200.59, 1.32, 1.55, {184, 184, 208}},
    {"Tl", 204.38, 1.45, 1.96, {166, 84, 77}},
    {"Pb", 207.2, 1.46, 2.02, {87, 89, 97}},
    {"U", 238.03, 1.96, 1.86, {0, 143, 255}},
};

std::string normalize_symbol(std::string_view s) {
    std::string t = trim(s);
    if (t.empty()) return t;
    std::string out;
    out += static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
    for (size_t i = 1; i < t.size(); ++i)
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(t[i])));
    return out;
}

} // namespace

const ElementInfo* find_element(std::string_view symbol) {
    const auto sym = normalize_symbol(symbol);
    for (const auto& e : kElements)
        if (e.symbol == sym) return &e;
    return nullptr;
}

const ElementInfo& element(std::string_view symbol) {
    if (const auto* e = find_element(symbol)) return *e;
    throw NotFoundError("unknown element '" + std::string(symbol) + "'");
}

double element_mass(std::string_view symbol) { return element(symbol).mass; }

double vdw_radius(std::string_view symbol) {
    const auto* e = find_element(symbol);
    if (!e || !e->vdw_radius)
        throw NotFoundError("no van der Waals radius for element '" + std::string(symbol) + "'");
    return *e->vdw_radius;
}

std::string element_from_atom_name(std::string_view atom_name, std::string_view residue_name) {
    const std::string name = trim(atom_name);
    if (name.empty()) return "X";
    const auto kind = classify_residue(residue_name);
    if (kind == ResidueKind::ion) {
        if (find_element(name)) return normalize_symbol(name);
    }
    std::string letters;
    for (char c : name)
        if (std::isalpha(static_cast<unsigned char>(c))) letters += c;
    if (letters.empty()) return "X";
    if (kind == ResidueKind::protein || kind == ResidueKind::water || kind == ResidueKind::solvent)
        return normalize_symbol(letters.substr(0, 1));
    if (letters.size() >= 2) {
        const auto two = normalize_symbol(letters.substr(0, 2));
        if (two != "Ca" && two != "Cd" && two != "Ne" && two != "Hg" && find_element(two))
            return two;
    }
    return normalize_symbol(letters.substr(0, 1));
}

} // namespace mdcrow::chem
