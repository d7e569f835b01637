#include "mdcrow/pdb/summary.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace mdcrow::pdb {

StructureSummary summarize_structure(const chem::Structure& s) {
    StructureSummary out;
    out.atoms = s.size();
    for (const auto& a : s.atoms) (a.element == "H" ? out.hydrogens : out.heavy_atoms)++;
    const auto res = chem::residues(s);
    out.residues = res.size();
    for (char c : chem::chain_ids(s)) out.chain_details.push_back({c, 0, 0, {}});
    out.chains = out.chain_details.size();
    for (const auto& r : res) {
        auto& ch = *std::find_if(out.chain_details.begin(), out.chain_details.end(),
                                 [&](const ChainSummary& c) { return c.id == r.key.chain; });
        ch.residues++;
        ch.atoms += r.atoms.size();
        switch (chem::classify_residue(r.name)) {
        case chem::ResidueKind::protein:
            out.protein_residues++;
            ch.sequence += chem::one_letter(r.name);
            break;
        case chem::ResidueKind::water: out.waters++; break;
        case chem::ResidueKind::ion: out.ions++; break;
        case chem::ResidueKind::solvent: out.solvent_molecules++; break;
        case chem::ResidueKind::heterogen:
            out.heterogen_residues++;
            out.heterogens[r.name]++;
            break;
        }
    }
    return out;
}

std::string format_summary(const StructureSummary& m) {
    std::string t = "atoms: " + std::to_string(m.atoms) + ", residues: " + std::to_string(m.residues) +
                    ", chains: " + std::to_string(m.chains) + "\n";
    t += "heavy atoms: " + std::to_string(m.heavy_atoms) + ", hydrogens: " + std::to_string(m.hydrogens) + "\n";
    t += "protein residues: " + std::to_string(m.protein_residues) + ", waters: " + std::to_string(m.waters) +
         ", ions: " + std::to_string(m.ions) + ", solvent molecules: " + std::to_string(m.solvent_molecules) +
         ", heterogen residues: " + std::to_string(m.heterogen_residues) + "\n";
    if (!m.heterogens.empty()) {
        std::vector<std::string> parts;
        for (const auto& [name, n] : m.heterogens) parts.push_back(name + " x" + std::to_string(n));
        t += "heterogens: " + join(parts, ", ") + "\n";
    }
    for (const auto& c : m.chain_details) {
        t += "chain " + std::string(1, c.id) + ": " + std::to_string(c.residues) + " residues, " +
             std::to_string(c.atoms) + " atoms";
        if (!c.sequence.empty()) t += ", sequence " + c.sequence;
        t += "\n";
    }
    return t;
}

image::Image render_structure(const chem::Structure& s, int width, int height) {
    if (s.empty()) throw UsageError("cannot render an empty structure");
    if (width < 16 || height < 16) throw UsageError("image must be at least 16x16 pixels");
    const Eigen::Matrix3Xd x = s.coordinates();
    const Eigen::Vector3d mean = x.rowwise().mean();
    const Eigen::Matrix3Xd c = x.colwise() - mean;
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
    if (s.size() > 1) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(c * c.transpose());
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector3d v = es.eigenvectors().col(2 - k);
            Eigen::Index arg = 0;
            v.cwiseAbs().maxCoeff(&arg);
            if (v(arg) < 0) v = -v;
            axes.col(k) = v;
        }
        if (axes.determinant() < 0) axes.col(2) = -axes.col(2);
    }
    const Eigen::Matrix3Xd p = axes.transpose() * c;

    image::Image img(width, height, {24, 24, 32});
    const double margin = 12.0;
    double extent = 0.0;
    for (Eigen::Index i = 0; i < p.cols(); ++i)
        extent = std::max({extent, std::abs(p(0, i)) + 2.0, std::abs(p(1, i)) + 2.0});
    const double scale = std::min((width / 2.0 - margin) / extent, (height / 2.0 - margin) / extent);

    std::vector<std::size_t> order(s.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p(2, static_cast<Eigen::Index>(a)) < p(2, static_cast<Eigen::Index>(b));
    });
    for (auto i : order) {
        const auto& a = s.atoms[i];
        const auto* e = chem::find_element(a.element);
        const image::Color col = e ? image::Color{e->color[0], e->color[1], e->color[2]} : image::Color{255, 20, 147};
        const double vdw = e && e->vdw_radius ? *e->vdw_radius : 1.8;
        const double r = std::max(1.5, 0.5 * vdw * scale);
        const auto idx = static_cast<Eigen::Index>(i);
        img.disc(width / 2.0 + p(0, idx) * scale, height / 2.0 - p(1, idx) * scale, r, col, {0, 0, 0});
    }
    return img;
}

} // namespace mdcrow::pdb
