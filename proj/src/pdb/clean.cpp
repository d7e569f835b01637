#include "mdcrow/pdb/clean.hpp"

#include "mdcrow/chem/bonds.hpp"
#include "mdcrow/chem/geometry.hpp"
#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <cmath>
#include <map>
#include <set>

namespace mdcrow::pdb {

using chem::Atom;
using chem::ResidueKind;
using chem::Structure;
using Vec = Eigen::Vector3d;

void validate(const CleanSpec& spec) {
    if (!(spec.target_ph > 0.0 && spec.target_ph < 14.0))
        throw UsageError("pH must lie strictly between 0 and 14, got " + format_number(spec.target_ph));
}

Structure remove_heterogens(const Structure& s, bool keep_water) {
    Structure out = s;
    out.atoms.clear();
    for (const auto& a : s.atoms) {
        const auto kind = chem::classify_residue(a.res_name);
        if (kind == ResidueKind::protein || (keep_water && kind == ResidueKind::water)) out.atoms.push_back(a);
    }
    return out;
}

namespace {

std::string residue_label(const chem::Residue& r) {
    return r.name + " " + std::string(1, r.key.chain) + std::to_string(r.key.seq);
}

Atom make_atom(const Atom& like, std::string name, std::string element, const Vec& pos) {
    Atom a = like;
    a.name = std::move(name);
    a.element = std::move(element);
    a.pos = pos;
    a.occupancy = 1.0;
    a.b_factor = 0.0;
    return a;
}

} // namespace

Structure add_missing_heavy_atoms(const Structure& s, std::vector<std::string>& warnings) {
    Structure out = s;
    out.atoms.clear();
    const auto res = chem::residues(s);
    for (size_t r = 0; r < res.size(); ++r) {
        const auto& residue = res[r];
        const auto kind = chem::classify_residue(residue.name);
        auto copy_as_is = [&] {
            for (auto i : residue.atoms) out.atoms.push_back(s.atoms[i]);
        };
        if (kind != ResidueKind::protein) {
            if (kind == ResidueKind::heterogen)
                warnings.push_back("no template for residue " + residue_label(residue) + "; left untouched");
            copy_as_is();
            continue;
        }
        const auto tmpl = chem::heavy_template(residue.name);
        std::map<std::string, Vec, std::less<>> have;
        for (auto i : residue.atoms) have.emplace(trim(s.atoms[i].name), s.atoms[i].pos);
        bool complete = true;
        for (const auto& rec : tmpl)
            if (!have.count(rec.name)) complete = false;
        if (complete) {
            copy_as_is();
            continue;
        }
        // Next residue's N, if peptide-bonded, fixes the carbonyl plane.
        std::optional<Vec> next_n;
        if (r + 1 < res.size() && res[r + 1].key.chain == residue.key.chain) {
            if (auto n = res[r + 1].find(s, "N"); n && have.count("C") && (s.atoms[*n].pos - have["C"]).norm() < 2.0)
                next_n = s.atoms[*n].pos;
        }
        std::vector<Atom> built;
        std::set<std::string> template_names;
        const Atom& like = s.atoms[residue.atoms.front()];
        for (const auto& rec : tmpl) {
            template_names.emplace(rec.name);
            if (auto it = have.find(rec.name); it != have.end()) {
                for (auto i : residue.atoms)
                    if (trim(s.atoms[i].name) == rec.name) built.push_back(s.atoms[i]);
                continue;
            }
            Vec pos;
            if (rec.name == "O" && next_n && have.count("CA")) {
                const Vec c = have["C"];
                pos = c - rec.bond * ((have["CA"] - c).normalized() + (*next_n - c).normalized()).normalized();
            } else if (!rec.a.empty() && have.count(rec.a) && have.count(rec.b) && have.count(rec.c)) {
                pos = chem::place_atom<double>(have[std::string(rec.a)], have[std::string(rec.b)],
                                               have[std::string(rec.c)], rec.bond, rec.angle, rec.dihedral);
            } else {
                warnings.push_back("cannot rebuild atom " + std::string(rec.name) + " of " + residue_label(residue) +
                                   ": anchoring backbone atoms are missing");
                continue;
            }
            have.emplace(std::string(rec.name), pos);
            built.push_back(make_atom(like, std::string(rec.name), std::string(rec.element), pos));
            built.back().hetero = false;
        }
        for (auto i : residue.atoms)
            if (!template_names.count(trim(s.atoms[i].name))) built.push_back(s.atoms[i]);
        out.atoms.insert(out.atoms.end(), built.begin(), built.end());
    }
    chem::renumber(out);
    return out;
}

namespace {

double xh_length(std::string_view element) {
    if (element == "N") return 1.01;
    if (element == "O") return 0.96;
    if (element == "S") return 1.34;
    return 1.09;
}

std::string h_name(std::string_view heavy, int index, int count, bool backbone_n) {
    if (backbone_n) return count == 1 ? "H" : "H" + std::to_string(index + 1);
    std::string stem = "H" + std::string(heavy.substr(1));
    if (count == 1) return stem;
    // Methylene hydrogens are numbered 2,3; methyl and amine 1,2,3.
    return stem + std::to_string(count == 2 ? index + 2 : index + 1);
}

// Any unit vector perpendicular to v, chosen deterministically.
Vec perpendicular(const Vec& v) { return v.unitOrthogonal(); }

std::vector<Vec> place_hydrogens(const Vec& x, const std::vector<Vec>& nbr, const std::vector<Vec>& nbr2, int count,
                                 bool tetrahedral, double len) {
    std::vector<Vec> out;
    std::vector<Vec> u;
    for (const auto& p : nbr) u.push_back((p - x).normalized());
    if (u.empty()) {
        // Isolated atom (water oxygen): fixed orientation.
        const double half = chem::deg2rad(tetrahedral ? 104.52 / 2 : 60.0);
        if (count >= 1) out.push_back(x + len * Vec(std::cos(half), std::sin(half), 0));
        if (count >= 2) out.push_back(x + len * Vec(std::cos(half), -std::sin(half), 0));
        if (count >= 3) out.push_back(x + len * Vec(-1, 0, 0));
        return out;
    }
    if (u.size() >= 2) {
        Vec bis = Vec::Zero();
        for (const auto& v : u) bis -= v;
        if (bis.norm() < 1e-6) bis = perpendicular(u[0]);
        bis.normalize();
        if (count == 1 || u.size() >= 3) {
            out.push_back(x + len * bis);
            return out;
        }
        Vec n = u[0].cross(u[1]);
        if (n.norm() < 1e-6) n = perpendicular(u[0]);
        n.normalize();
        const double a = chem::deg2rad(109.47 / 2);
        out.push_back(x + len * (std::cos(a) * bis + std::sin(a) * n));
        out.push_back(x + len * (std::cos(a) * bis - std::sin(a) * n));
        return out;
    }
    // One neighbour: build along a dihedral from a second-shell atom.
    const Vec b = nbr[0];
    Vec a = nbr2.empty() ? Vec(b + perpendicular(u[0])) : nbr2[0];
    const double angle = tetrahedral ? 109.47 : 120.0;
    const double start = tetrahedral ? 180.0 : 180.0;
    const double step = tetrahedral ? 120.0 : 180.0;
    for (int k = 0; k < count; ++k)
        out.push_back(chem::place_atom<double>(a, b, x, len, angle, start + step * k));
    return out;
}

} // namespace

Structure add_hydrogens(const Structure& s, double ph) {
    // Strip hydrogens that will be rebuilt.
    Structure heavy = s;
    heavy.atoms.clear();
    for (const auto& a : s.atoms) {
        const auto kind = chem::classify_residue(a.res_name);
        const bool rebuilt = kind == ResidueKind::protein || kind == ResidueKind::water;
        if (rebuilt && a.element == "H") continue;
        heavy.atoms.push_back(a);
    }
    const auto bonds = chem::perceive_bonds(heavy);
    const auto adj = chem::adjacency(heavy.size(), bonds);
    const auto res = chem::residues(heavy);

    Structure out = heavy;
    out.atoms.clear();
    char prev_chain = 0;
    for (const auto& residue : res) {
        const bool chain_start = residue.key.chain != prev_chain;
        prev_chain = residue.key.chain;
        for (auto i : residue.atoms) out.atoms.push_back(heavy.atoms[i]);
        const auto kind = chem::classify_residue(residue.name);
        if (kind != ResidueKind::protein && kind != ResidueKind::water) continue;

        bool n_terminal = false;
        if (kind == ResidueKind::protein) {
            n_terminal = chain_start;
            if (auto n = residue.find(heavy, "N")) {
                bool peptide = false;
                for (auto j : adj[*n])
                    if (trim(heavy.atoms[j].name) == "C" && heavy.atoms[j].res_seq != heavy.atoms[*n].res_seq)
                        peptide = true;
                n_terminal = !peptide;
            }
        }
        chem::ProtonationContext ctx{ph, n_terminal};
        for (const auto& site : chem::hydrogen_sites(residue.name, ctx)) {
            const auto hi = residue.find(heavy, site.heavy);
            if (!hi) continue;
            const Atom& h_atom = heavy.atoms[*hi];
            std::vector<Vec> nbr, nbr2;
            for (auto j : adj[*hi]) {
                if (heavy.atoms[j].element == "H") continue;
                nbr.push_back(heavy.atoms[j].pos);
            }
            if (nbr.size() == 1) {
                for (auto j : adj[*hi]) {
                    if (heavy.atoms[j].element == "H") continue;
                    for (auto k : adj[j])
                        if (k != *hi && heavy.atoms[k].element != "H") {
                            nbr2.push_back(heavy.atoms[k].pos);
                            break;
                        }
                    break;
                }
            }
            const bool backbone_n = kind == ResidueKind::protein && site.heavy == "N";
            const auto pos = place_hydrogens(h_atom.pos, nbr, nbr2, site.count, site.tetrahedral,
                                             xh_length(h_atom.element));
            for (int k = 0; k < static_cast<int>(pos.size()); ++k) {
                std::string name = kind == ResidueKind::water ? "H" + std::to_string(k + 1)
                                                              : h_name(site.heavy, k, site.count, backbone_n);
                out.atoms.push_back(make_atom(h_atom, std::move(name), "H", pos[static_cast<size_t>(k)]));
            }
        }
    }
    chem::renumber(out);
    return out;
}

CleanResult clean_structure(const Structure& s, const CleanSpec& spec) {
    validate(spec);
    if (s.empty()) throw UsageError("cannot clean an empty structure");
    CleanResult r;
    Structure cur = s;
    if (spec.remove_heterogens) {
        cur = remove_heterogens(cur, spec.keep_water);
        r.removed_atoms = s.size() - cur.size();
    }
    auto heavy_count = [](const Structure& x) {
        size_t n = 0;
        for (const auto& a : x.atoms) n += a.element != "H";
        return n;
    };
    if (spec.add_missing_heavy_atoms) {
        const size_t before = heavy_count(cur);
        cur = add_missing_heavy_atoms(cur, r.warnings);
        r.added_heavy_atoms = heavy_count(cur) - before;
    }
    if (spec.add_hydrogens) {
        size_t h_before = cur.size() - heavy_count(cur);
        cur = add_hydrogens(cur, spec.target_ph);
        const size_t h_after = cur.size() - heavy_count(cur);
        r.added_hydrogens = h_after > h_before ? h_after - h_before : 0;
    }
    cur.source = chem::StructureSource::cleaned;
    std::vector<std::string> steps;
    if (spec.remove_heterogens) steps.push_back(spec.keep_water ? "heterogens removed (water kept)" : "heterogens removed");
    if (spec.add_missing_heavy_atoms) steps.push_back("missing heavy atoms added");
    if (spec.add_hydrogens) steps.push_back("hydrogens added at pH " + format_number(spec.target_ph));
    cur.provenance = s.provenance + (s.provenance.empty() ? "" : "; ") + "cleaned: " +
                     (steps.empty() ? std::string("no changes requested") : join(steps, ", "));
    r.structure = std::move(cur);
    return r;
}

} // namespace mdcrow::pdb
