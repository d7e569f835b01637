#include "mdcrow/chem/builder.hpp"

#include "mdcrow/chem/geometry.hpp"
#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/error.hpp"

#include <map>

namespace mdcrow::chem {

namespace {

constexpr double kNCa = 1.458;
constexpr double kCaC = 1.525;
constexpr double kCN = 1.329;
constexpr double kNCaC = 111.2;
constexpr double kCaCN = 116.2;
constexpr double kCNCa = 121.7;

} // namespace

Structure build_peptide(std::string_view sequence, const std::vector<BackboneAngles>& angles,
                        char chain, int first_seq) {
    if (!angles.empty() && angles.size() != sequence.size())
        throw UsageError("backbone angle count does not match sequence length");
    Structure s;
    s.source = StructureSource::generated;

    Eigen::Vector3d n(0, 0, 0);
    Eigen::Vector3d ca(kNCa, 0, 0);
    Eigen::Vector3d c = place_atom<double>(Eigen::Vector3d(0, 1, 0), n, ca, kCaC, kNCaC, -60.0);

    for (size_t i = 0; i < sequence.size(); ++i) {
        const auto res = three_letter(sequence[i]);
        if (!res) throw UsageError(std::string("unknown residue letter '") + sequence[i] + "'");
        const BackboneAngles ang = angles.empty() ? BackboneAngles{} : angles[i];

        if (i > 0) {
            const BackboneAngles prev = angles.empty() ? BackboneAngles{} : angles[i - 1];
            const Eigen::Vector3d n_next = place_atom<double>(n, ca, c, kCN, kCaCN, prev.psi);
            const Eigen::Vector3d ca_next = place_atom<double>(ca, c, n_next, kNCa, kCNCa, prev.omega);
            const Eigen::Vector3d c_next = place_atom<double>(c, n_next, ca_next, kCaC, kNCaC, ang.phi);
            n = n_next;
            ca = ca_next;
            c = c_next;
        }

        std::map<std::string_view, Eigen::Vector3d> placed{{"N", n}, {"CA", ca}, {"C", c}};
        for (const auto& r : heavy_template(*res)) {
            if (r.name == "N" || r.name == "CA" || r.name == "C") continue;
            Eigen::Vector3d p;
            if (r.name == "O") {
                p = place_atom<double>(n, ca, c, r.bond, r.angle, ang.psi + 180.0);
            } else {
                p = place_atom<double>(placed.at(r.a), placed.at(r.b), placed.at(r.c), r.bond,
                                       r.angle, r.dihedral);
            }
            placed[r.name] = p;
        }
        for (const auto& r : heavy_template(*res)) {
            Atom a;
            a.name = std::string(r.name);
            a.element = std::string(r.element);
            a.res_name = *res;
            a.res_seq = first_seq + static_cast<int>(i);
            a.chain = chain;
            a.pos = placed.at(r.name);
            s.atoms.push_back(std::move(a));
        }
    }
    renumber(s);
    s.provenance = "generated peptide, " + std::to_string(sequence.size()) + " residues";
    return s;
}

Structure build_ideal_helix(std::size_t n_residues) {
    std::string seq(n_residues, 'A');
    std::vector<BackboneAngles> angles(n_residues, BackboneAngles{-57.0, -47.0, 180.0});
    return build_peptide(seq, angles);
}

} // namespace mdcrow::chem
