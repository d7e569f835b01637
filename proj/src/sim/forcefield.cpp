#include "mdcrow/sim/forcefield.hpp"

#include "mdcrow/chem/bonds.hpp"
#include "mdcrow/chem/elements.hpp"
#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/sim/spec.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mdcrow::sim {

namespace {

struct Lj {
    double sigma, epsilon;
};

const std::map<std::string, Lj, std::less<>>& lj_table() {
    static const std::map<std::string, Lj, std::less<>> t{
        {"H", {2.50, 0.015}},  {"C", {3.40, 0.086}},  {"N", {3.25, 0.170}},   {"O", {3.00, 0.170}},
        {"S", {3.56, 0.250}},  {"P", {3.74, 0.200}},  {"SE", {3.70, 0.300}},  {"NA", {3.33, 0.0028}},
        {"CL", {4.40, 0.100}}, {"K", {4.93, 0.0003}}, {"MG", {1.41, 0.875}},  {"CA", {2.41, 0.460}},
        {"ZN", {1.95, 0.250}}, {"FE", {2.60, 0.010}}, {"F", {2.90, 0.061}},   {"BR", {4.00, 0.320}},
        {"I", {4.20, 0.400}},
    };
    return t;
}

constexpr Lj kUnitedMethyl{3.75, 0.195};

bool has_template(const std::string& res) {
    using chem::ResidueKind;
    switch (chem::classify_residue(res)) {
        case ResidueKind::protein:
        case ResidueKind::water:
        case ResidueKind::solvent:
            return true;
        case ResidueKind::ion: {
            static const char* ions[] = {"NA", "CL", "K", "MG", "CA", "ZN", "NA+", "CL-", "K+"};
            return std::find(std::begin(ions), std::end(ions), res) != std::end(ions);
        }
        case ResidueKind::heterogen:
            return res == "ACE" || res == "NME" || res == "NH2";
    }
    return false;
}

double angle_at(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
    Eigen::Vector3d u = (a - b).normalized(), v = (c - b).normalized();
    return std::acos(std::clamp(u.dot(v), -1.0, 1.0));
}

void set_lj(ToySystem& sys, const chem::Structure& s) {
    const std::size_t n = s.size();
    sys.sigma.resize(n);
    sys.epsilon.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = s.atoms[i];
        if (a.name == "CM" && chem::classify_residue(a.res_name) == chem::ResidueKind::solvent) {
            sys.sigma[i] = kUnitedMethyl.sigma;
            sys.epsilon[i] = kUnitedMethyl.epsilon;
            continue;
        }
        auto it = lj_table().find(to_upper(a.element));
        if (it == lj_table().end())
            throw MissingTemplateError(a.res_name, "No nonbonded parameters for element '" + a.element +
                                                       "' (atom " + a.name + " of residue " + a.res_name + ")");
        sys.sigma[i] = it->second.sigma;
        sys.epsilon[i] = it->second.epsilon;
    }
}

} // namespace

void finalize_topology(ToySystem& sys) {
    const std::size_t n = sys.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& b : sys.bonds) {
        adj[b.i].push_back(b.j);
        adj[b.j].push_back(b.i);
    }
    sys.molecule.assign(n, -1);
    sys.n_molecules = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sys.molecule[i] >= 0) continue;
        std::vector<std::size_t> stack{i};
        sys.molecule[i] = sys.n_molecules;
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (auto v : adj[u])
                if (sys.molecule[v] < 0) {
                    sys.molecule[v] = sys.n_molecules;
                    stack.push_back(v);
                }
        }
        ++sys.n_molecules;
    }
    // exclusions: everything within three bonds
    sys.exclusions.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        if (adj[i].empty()) continue;
        std::vector<std::size_t> frontier{i}, seen{i};
        for (int depth = 0; depth < 3; ++depth) {
            std::vector<std::size_t> next;
            for (auto u : frontier)
                for (auto v : adj[u])
                    if (std::find(seen.begin(), seen.end(), v) == seen.end()) {
                        seen.push_back(v);
                        next.push_back(v);
                    }
            frontier = std::move(next);
        }
        seen.erase(seen.begin());
        std::sort(seen.begin(), seen.end());
        sys.exclusions[i] = std::move(seen);
    }
}

ToySystem free_particles(const chem::Structure& s, double cutoff) {
    ToySystem sys;
    sys.mass = chem::masses(s);
    sys.cutoff = cutoff;
    sys.box = s.box;
    set_lj(sys, s);
    finalize_topology(sys);
    return sys;
}

ToySystem build_toy_system(const chem::Structure& s, const std::string& forcefield_id, double cutoff) {
    const auto& known = known_forcefields();
    if (std::find(known.begin(), known.end(), forcefield_id) == known.end())
        throw UsageError("unknown forcefield '" + forcefield_id + "'");
    if (forcefield_id != "toy") {
        for (const auto& r : chem::residues(s)) {
            const auto& name = r.name;
            if (!has_template(chem::canonical_residue(name)))
                throw MissingTemplateError(
                    name, "No template found for residue " + name + " (chain " + std::string(1, r.key.chain) +
                              ", residue " + std::to_string(r.key.seq) + ") in forcefield " + forcefield_id +
                              ". Remove the heterogen with the cleaning tool or use a forcefield with a template for it");
        }
    }

    ToySystem sys = free_particles(s, cutoff);

    // covalent bonds, restricted to one residue or consecutive protein residues
    for (const auto& [i, j] : chem::perceive_bonds(s)) {
        const auto& a = s.atoms[i];
        const auto& b = s.atoms[j];
        const bool same = a.chain == b.chain && a.res_seq == b.res_seq && a.icode == b.icode;
        const bool peptide = a.chain == b.chain && chem::is_amino_acid(chem::canonical_residue(a.res_name)) &&
                             chem::is_amino_acid(chem::canonical_residue(b.res_name));
        const bool disulfide = a.element == "S" && b.element == "S";
        if (!same && !peptide && !disulfide) continue;
        sys.bonds.push_back({i, j, (a.pos - b.pos).norm(), kBondK});
    }
    // water keeps its shape through an H-H spring
    for (const auto& r : chem::residues(s)) {
        if (!chem::is_water(r.name)) continue;
        auto h1 = r.find(s, "H1"), h2 = r.find(s, "H2");
        if (h1 && h2) sys.bonds.push_back({*h1, *h2, (s.atoms[*h1].pos - s.atoms[*h2].pos).norm(), kBondK});
    }

    std::vector<std::vector<std::size_t>> adj(s.size());
    for (const auto& b : sys.bonds) {
        adj[b.i].push_back(b.j);
        adj[b.j].push_back(b.i);
    }
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (chem::is_water(s.atoms[j].res_name)) continue;
        const auto& nb = adj[j];
        for (std::size_t x = 0; x < nb.size(); ++x)
            for (std::size_t y = x + 1; y < nb.size(); ++y) {
                const double th = angle_at(s.atoms[nb[x]].pos, s.atoms[j].pos, s.atoms[nb[y]].pos);
                if (th > 175.0 * 3.14159265358979 / 180.0) continue;  // linear: no stable gradient
                sys.angles.push_back({nb[x], j, nb[y], th, kAngleK});
            }
    }
    finalize_topology(sys);
    return sys;
}

} // namespace mdcrow::sim
