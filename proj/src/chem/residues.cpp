#include "mdcrow/chem/residues.hpp"

#include "mdcrow/common/strings.hpp"

#include <array>
#include <cctype>
#include <map>

namespace mdcrow::chem {

namespace {

struct AminoName {
    char one;
    std::string_view three;
};

constexpr std::array<AminoName, 20> kAmino{{
    {'A', "ALA"}, {'R', "ARG"}, {'N', "ASN"}, {'D', "ASP"}, {'C', "CYS"},
    {'Q', "GLN"}, {'E', "GLU"}, {'G', "GLY"}, {'H', "HIS"}, {'I', "ILE"},
    {'L', "LEU"}, {'K', "LYS"}, {'M', "MET"}, {'F', "PHE"}, {'P', "PRO"},
    {'S', "SER"}, {'T', "THR"}, {'W', "TRP"}, {'Y', "TYR"}, {'V', "VAL"},
}};

const std::map<std::string_view, std::string_view> kVariants{
    {"HID", "HIS"}, {"HIE", "HIS"}, {"HIP", "HIS"}, {"HSD", "HIS"}, {"HSE", "HIS"},
    {"HSP", "HIS"}, {"ASH", "ASP"}, {"GLH", "GLU"}, {"LYN", "LYS"}, {"CYX", "CYS"},
    {"CYM", "CYS"}, {"MSE", "MET"},
};

// Backbone, idealized (Engh & Huber style values).
#define BACKBONE                                             \
    {"N", "N", "", "", "", 0, 0, 0},                         \
    {"CA", "C", "", "", "N", 1.458, 0, 0},                   \
    {"C", "C", "", "N", "CA", 1.525, 111.2, 0},              \
    {"O", "O", "N", "CA", "C", 1.231, 120.5, 0},             \
    {"CB", "C", "C", "N", "CA", 1.53, 109.5, 122.69}

const AtomRecipe kGly[] = {
    {"N", "N", "", "", "", 0, 0, 0},
    {"CA", "C", "", "", "N", 1.458, 0, 0},
    {"C", "C", "", "N", "CA", 1.525, 111.2, 0},
    {"O", "O", "N", "CA", "C", 1.231, 120.5, 0},
};
const AtomRecipe kAla[] = {BACKBONE};
const AtomRecipe kArg[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.8, -60},
    {"CD", "C", "CA", "CB", "CG", 1.52, 111.8, 180},
    {"NE", "N", "CB", "CG", "CD", 1.46, 111.7, 180},
    {"CZ", "C", "CG", "CD", "NE", 1.33, 124.2, 180},
    {"NH1", "N", "CD", "NE", "CZ", 1.33, 120.0, 0},
    {"NH2", "N", "CD", "NE", "CZ", 1.33, 120.0, 180}};
const AtomRecipe kAsn[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 112.6, -60},
    {"OD1", "O", "CA", "CB", "CG", 1.23, 120.8, -60},
    {"ND2", "N", "CA", "CB", "CG", 1.33, 116.4, 120}};
const AtomRecipe kAsp[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.0, -60},
    {"OD1", "O", "CA", "CB", "CG", 1.25, 119.2, -60},
    {"OD2", "O", "CA", "CB", "CG", 1.25, 118.2, 120}};
const AtomRecipe kCys[] = {BACKBONE,
    {"SG", "S", "N", "CA", "CB", 1.81, 113.8, -60}};
const AtomRecipe kGln[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.8, -60},
    {"CD", "C", "CA", "CB", "CG", 1.52, 112.6, 180},
    {"OE1", "O", "CB", "CG", "CD", 1.23, 120.9, -60},
    {"NE2", "N", "CB", "CG", "CD", 1.33, 116.5, 120}};
const AtomRecipe kGlu[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.8, -60},
    {"CD", "C", "CA", "CB", "CG", 1.52, 113.3, 180},
    {"OE1", "O", "CB", "CG", "CD", 1.25, 119.0, -60},
    {"OE2", "O", "CB", "CG", "CD", 1.25, 118.0, 120}};
const AtomRecipe kHis[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.50, 113.7, -60},
    {"ND1", "N", "CA", "CB", "CG", 1.38, 122.7, 90},
    {"CD2", "C", "CA", "CB", "CG", 1.36, 131.0, -90},
    {"CE1", "C", "CB", "CG", "ND1", 1.32, 108.5, 180},
    {"NE2", "N", "CB", "CG", "CD2", 1.37, 107.3, 180}};
const AtomRecipe kIle[] = {BACKBONE,
    {"CG1", "C", "N", "CA", "CB", 1.53, 110.4, -60},
    {"CG2", "C", "N", "CA", "CB", 1.53, 110.5, 180},
    {"CD1", "C", "CA", "CB", "CG1", 1.52, 114.0, 180}};
const AtomRecipe kLeu[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.53, 116.1, -60},
    {"CD1", "C", "CA", "CB", "CG", 1.52, 110.3, 180},
    {"CD2", "C", "CA", "CB", "CG", 1.52, 110.6, -60}};
const AtomRecipe kLys[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.8, -60},
    {"CD", "C", "CA", "CB", "CG", 1.52, 111.5, 180},
    {"CE", "C", "CB", "CG", "CD", 1.52, 111.5, 180},
    {"NZ", "N", "CG", "CD", "CE", 1.49, 111.7, 180}};
const AtomRecipe kMet[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.52, 113.7, -60},
    {"SD", "S", "CA", "CB", "CG", 1.81, 112.7, 180},
    {"CE", "C", "CB", "CG", "SD", 1.79, 100.6, 180}};
const AtomRecipe kPhe[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.50, 113.9, -60},
    {"CD1", "C", "CA", "CB", "CG", 1.39, 120.0, 90},
    {"CD2", "C", "CA", "CB", "CG", 1.39, 120.0, -90},
    {"CE1", "C", "CB", "CG", "CD1", 1.39, 120.0, 180},
    {"CE2", "C", "CB", "CG", "CD2", 1.39, 120.0, 180},
    {"CZ", "C", "CG", "CD1", "CE1", 1.39, 120.0, 0}};
const AtomRecipe kPro[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.50, 104.5, 30},
    {"CD", "C", "CA", "CB", "CG", 1.51, 105.5, -35}};
const AtomRecipe kSer[] = {BACKBONE,
    {"OG", "O", "N", "CA", "CB", 1.42, 111.1, -60}};
const AtomRecipe kThr[] = {BACKBONE,
    {"OG1", "O", "N", "CA", "CB", 1.43, 109.2, -60},
    {"CG2", "C", "N", "CA", "CB", 1.53, 111.1, 180}};
const AtomRecipe kTrp[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.50, 114.1, -60},
    {"CD1", "C", "CA", "CB", "CG", 1.37, 127.1, 90},
    {"CD2", "C", "CA", "CB", "CG", 1.43, 126.6, -90},
    {"NE1", "N", "CB", "CG", "CD1", 1.38, 108.5, 180},
    {"CE2", "C", "CB", "CG", "CD2", 1.40, 107.2, 180},
    {"CE3", "C", "CB", "CG", "CD2", 1.40, 133.9, 0},
    {"CZ2", "C", "CG", "CD2", "CE2", 1.40, 122.4, 180},
    {"CZ3", "C", "CG", "CD2", "CE3", 1.39, 118.7, 180},
    {"CH2", "C", "CD2", "CE2", "CZ2", 1.37, 117.5, 0}};
const AtomRecipe kTyr[] = {BACKBONE,
    {"CG", "C", "N", "CA", "CB", 1.51, 113.8, -60},
    {"CD1", "C", "CA", "CB", "CG", 1.39, 120.8, 90},
    {"CD2", "C", "CA", "CB", "CG", 1.39, 121.2, -90},
    {"CE1", "C", "CB", "CG", "CD1", 1.39, 121.1, 180},
    {"CE2", "C", "CB", "CG", "CD2", 1.39, 121.1, 180},
    {"CZ", "C", "CG", "CD1", "CE1", 1.39, 119.6, 0},
    {"OH", "O", "CD1", "CE1", "CZ", 1.39, 119.9, 180}};
const AtomRecipe kVal[] = {BACKBONE,
    {"CG1", "C", "N", "CA", "CB", 1.53, 110.7, 180},
    {"CG2", "C", "N", "CA", "CB", 1.53, 110.4, -60}};

#undef BACKBONE

const std::map<std::string_view, std::span<const AtomRecipe>> kTemplates{
    {"ALA", kAla}, {"ARG", kArg}, {"ASN", kAsn}, {"ASP", kAsp}, {"CYS", kCys},
    {"GLN", kGln}, {"GLU", kGlu}, {"GLY", kGly}, {"HIS", kHis}, {"ILE", kIle},
    {"LEU", kLeu}, {"LYS", kLys}, {"MET", kMet}, {"PHE", kPhe}, {"PRO", kPro},
    {"SER", kSer}, {"THR", kThr}, {"TRP", kTrp}, {"TYR", kTyr}, {"VAL", kVal},
};

const std::map<std::string_view, double> kPka{
    {"HIS", 6.0}, {"ASP", 3.9}, {"GLU", 4.1}, {"LYS", 10.5},
    {"CYS", 8.3}, {"TYR", 10.1}, {"ARG", 12.5},
};

bool protonated(std::string_view res, double ph) {
    auto it = kPka.find(res);
    return it != kPka.end() && ph < it->second;
}

} // namespace

bool is_water(std::string_view res_name) {
    const auto n = to_upper(trim(res_name));
    return n == "HOH" || n == "WAT" || n == "TIP3" || n == "TIP" || n == "SOL" || n == "H2O" ||
           n == "DOD";
}

bool is_amino_acid(std::string_view res_name) {
    return kTemplates.count(canonical_residue(res_name)) > 0;
}

std::string canonical_residue(std::string_view res_name) {
    const auto n = to_upper(trim(res_name));
    auto it = kVariants.find(n);
    return it == kVariants.end() ? n : std::string(it->second);
}

ResidueKind classify_residue(std::string_view res_name) {
    const auto n = to_upper(trim(res_name));
    if (is_amino_acid(n)) return ResidueKind::protein;
    if (is_water(n)) return ResidueKind::water;
    if (n == "MOH" || n == "ACN" || n == "MEOH") return ResidueKind::solvent;
    static const std::array<std::string_view, 12> ions{"NA", "CL", "K", "MG", "CA", "ZN",
                                                       "FE", "CU", "MN", "NI", "CO", "CD"};
    for (auto ion : ions)
        if (n == ion) return ResidueKind::ion;
    return ResidueKind::heterogen;
}

std::optional<std::string> three_letter(char one) {
    for (const auto& a : kAmino)
        if (a.one == std::toupper(static_cast<unsigned char>(one))) return std::string(a.three);
    return std::nullopt;
}

char one_letter(std::string_view res_name) {
    const auto n = canonical_residue(res_name);
    for (const auto& a : kAmino)
        if (a.three == n) return a.one;
    return 'X';
}

std::optional<double> side_chain_pka(std::string_view res_name) {
    auto it = kPka.find(canonical_residue(res_name));
    if (it == kPka.end()) return std::nullopt;
    return it->second;
}

std::span<const AtomRecipe> heavy_template(std::string_view res_name) {
    auto it = kTemplates.find(canonical_residue(res_name));
    if (it == kTemplates.end()) return {};
    return it->second;
}

std::vector<HydrogenSite> hydrogen_sites(std::string_view res_name, const ProtonationContext& ctx) {
    const auto res = canonical_residue(res_name);
    std::vector<HydrogenSite> sites;
    auto add = [&](std::string_view heavy, int count, bool tetra) {
        if (count > 0) sites.push_back({heavy, count, tetra});
    };

    if (is_water(res)) {
        add("O", 2, true);
        return sites;
    }
    if (res == "MOH") {
        add("O", 1, true);
        return sites;
    }
    if (!is_amino_acid(res)) return sites;

    if (ctx.n_terminal)
        add("N", res == "PRO" ? 2 : 3, true);
    else if (res != "PRO")
        add("N", 1, false);
    add("CA", res == "GLY" ? 2 : 1, true);

    const bool prot = protonated(res, ctx.ph);
    if (res == "ALA") {
        add("CB", 3, true);
    } else if (res == "ARG") {
        add("CB", 2, true); add("CG", 2, true); add("CD", 2, true);
        add("NE", 1, false); add("NH1", 2, false); add("NH2", prot ? 2 : 1, false);
    } else if (res == "ASN") {
        add("CB", 2, true); add("ND2", 2, false);
    } else if (res == "ASP") {
        add("CB", 2, true); add("OD2", prot ? 1 : 0, true);
    } else if (res == "CYS") {
        add("CB", 2, true); add("SG", prot ? 1 : 0, true);
    } else if (res == "GLN") {
        add("CB", 2, true); add("CG", 2, true); add("NE2", 2, false);
    } else if (res == "GLU") {
        add("CB", 2, true); add("CG", 2, true); add("OE2", prot ? 1 : 0, true);
    } else if (res == "HIS") {
        add("CB", 2, true); add("ND1", prot ? 1 : 0, false); add("CD2", 1, false);
        add("CE1", 1, false); add("NE2", 1, false);
    } else if (res == "ILE") {
        add("CB", 1, true); add("CG1", 2, true); add("CG2", 3, true); add("CD1", 3, true);
    } else if (res == "LEU") {
        add("CB", 2, true); add("CG", 1, true); add("CD1", 3, true); add("CD2", 3, true);
    } else if (res == "LYS") {
        add("CB", 2, true); add("CG", 2, true); add("CD", 2, true); add("CE", 2, true);
        add("NZ", prot ? 3 : 2, true);
    } else if (res == "MET") {
        add("CB", 2, true); add("CG", 2, true); add("CE", 3, true);
    } else if (res == "PHE") {
        add("CB", 2, true);
        for (auto n : {"CD1", "CD2", "CE1", "CE2", "CZ"}) add(n, 1, false);
    } else if (res == "PRO") {
        add("CB", 2, true); add("CG", 2, true); add("CD", 2, true);
    } else if (res == "SER") {
        add("CB", 2, true); add("OG", 1, true);
    } else if (res == "THR") {
        add("CB", 1, true); add("OG1", 1, true); add("CG2", 3, true);
    } else if (res == "TRP") {
        add("CB", 2, true);
        for (auto n : {"CD1", "NE1", "CE3", "CZ2", "CZ3", "CH2"}) add(n, 1, false);
    } else if (res == "TYR") {
        add("CB", 2, true);
        for (auto n : {"CD1", "CD2", "CE1", "CE2"}) add(n, 1, false);
        add("OH", prot ? 1 : 0, true);
    } else if (res == "VAL") {
        add("CB", 1, true); add("CG1", 3, true); add("CG2", 3, true);
    }
    return sites;
}

} // namespace mdcrow::chem
