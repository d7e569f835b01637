#include "mdcrow/analysis/secondary.hpp"

#include "mdcrow/chem/residues.hpp"

#include <optional>

namespace mdcrow::analysis {

namespace {

constexpr double kCoupling = 0.084 * 332.0;
constexpr double kHbondCutoff = -0.5;
constexpr double kMaxCaDistance = 9.0;

struct Backbone {
    chem::ResidueKey key;
    bool complete = false;
    bool proline = false;
    Eigen::Vector3d n, ca, c, o;
    std::optional<Eigen::Vector3d> h;
};

} // namespace

double hbond_energy(const Eigen::Vector3d& n, const Eigen::Vector3d& h, const Eigen::Vector3d& c,
                    const Eigen::Vector3d& o) {
    const double r_on = (o - n).norm();
    const double r_ch = (c - h).norm();
    const double r_oh = (o - h).norm();
    const double r_cn = (c - n).norm();
    return kCoupling * (1.0 / r_on + 1.0 / r_ch - 1.0 / r_oh - 1.0 / r_cn);
}

SecondaryStructure secondary_structure(const chem::Structure& s) {
    SecondaryStructure out;
    std::vector<Backbone> bb;
    for (const auto& res : chem::residues(s)) {
        if (chem::classify_residue(res.name) != chem::ResidueKind::protein) continue;
        Backbone b;
        b.key = res.key;
        b.proline = chem::canonical_residue(res.name) == "PRO";
        const auto n = res.find(s, "N");
        const auto ca = res.find(s, "CA");
        const auto c = res.find(s, "C");
        const auto o = res.find(s, "O");
        b.complete = n && ca && c && o;
        if (b.complete) {
            b.n = s.atoms[*n].pos;
            b.ca = s.atoms[*ca].pos;
            b.c = s.atoms[*c].pos;
            b.o = s.atoms[*o].pos;
            if (auto h = res.find(s, "H")) b.h = s.atoms[*h].pos;
            else if (auto hn = res.find(s, "HN")) b.h = s.atoms[*hn].pos;
        } else {
            out.warnings.push_back("residue " + res.name + " " + std::string(1, res.key.chain) +
                                   std::to_string(res.key.seq) + " lacks backbone atoms; classified C");
        }
        bb.push_back(b);
    }
    const auto n_res = bb.size();
    out.residues.reserve(n_res);
    for (const auto& b : bb) out.residues.push_back(b.key);

    // linked[i]: residue i+1 follows i through a peptide bond.
    std::vector<bool> linked(n_res, false);
    for (size_t i = 0; i + 1 < n_res; ++i)
        linked[i] = bb[i].complete && bb[i + 1].complete && bb[i].key.chain == bb[i + 1].key.chain &&
                    (bb[i].c - bb[i + 1].n).norm() < 2.5;
    for (size_t i = 1; i < n_res; ++i)
        if (!bb[i].h && bb[i].complete && !bb[i].proline && linked[i - 1])
            bb[i].h = bb[i].n + (bb[i - 1].c - bb[i - 1].o).normalized();

    // hb[j][i]: C=O of j accepts from N-H of i.
    std::vector<std::vector<bool>> hb(n_res, std::vector<bool>(n_res, false));
    for (size_t j = 0; j < n_res; ++j) {
        if (!bb[j].complete) continue;
        for (size_t i = 0; i < n_res; ++i) {
            if (i == j || i == j + 1 || !bb[i].complete || !bb[i].h || bb[i].proline) continue;
            if ((bb[i].ca - bb[j].ca).norm() > kMaxCaDistance) continue;
            if (hbond_energy(bb[i].n, *bb[i].h, bb[j].c, bb[j].o) < kHbondCutoff) hb[j][i] = true;
        }
    }
    auto hbond = [&](long acceptor, long donor) {
        if (acceptor < 0 || donor < 0 || acceptor >= static_cast<long>(n_res) || donor >= static_cast<long>(n_res))
            return false;
        return static_cast<bool>(hb[static_cast<size_t>(acceptor)][static_cast<size_t>(donor)]);
    };
    auto contiguous = [&](long a, long b) {
        if (a < 0 || b >= static_cast<long>(n_res) || a > b) return false;
        for (long k = a; k < b; ++k)
            if (!linked[static_cast<size_t>(k)]) return false;
        return true;
    };

    std::string cls(n_res, 'C');

    // Bridges.
    for (long i = 1; i + 1 < static_cast<long>(n_res); ++i) {
        if (!contiguous(i - 1, i + 1)) continue;
        for (long j = 1; j + 1 < static_cast<long>(n_res); ++j) {
            if (std::abs(i - j) < 3 || !contiguous(j - 1, j + 1)) continue;
            const bool parallel = (hbond(i - 1, j) && hbond(j, i + 1)) || (hbond(j - 1, i) && hbond(i, j + 1));
            const bool antiparallel = (hbond(i, j) && hbond(j, i)) || (hbond(i - 1, j + 1) && hbond(j - 1, i + 1));
            if (parallel || antiparallel) {
                cls[static_cast<size_t>(i)] = 'E';
                cls[static_cast<size_t>(j)] = 'E';
            }
        }
    }

    // Alpha helices take priority over strands.
    std::vector<bool> turn4(n_res, false);
    for (long i = 0; i + 4 < static_cast<long>(n_res); ++i)
        turn4[static_cast<size_t>(i)] = contiguous(i, i + 4) && hbond(i, i + 4);
    for (long i = 1; i + 3 < static_cast<long>(n_res); ++i)
        if (turn4[static_cast<size_t>(i - 1)] && turn4[static_cast<size_t>(i)])
            for (long k = i; k <= i + 3; ++k) cls[static_cast<size_t>(k)] = 'H';

    out.classes = cls;
    for (char c : cls) {
        if (c == 'H') ++out.helix;
        else if (c == 'E') ++out.strand;
        else ++out.coil;
    }
    return out;
}

std::vector<SecondaryStructure> secondary_structure(const sim::Trajectory& traj) {
    std::vector<SecondaryStructure> out;
    chem::Structure frame = traj.topology;
    for (const auto& xyz : traj.frames) {
        frame.set_coordinates(xyz);
        out.push_back(secondary_structure(frame));
    }
    return out;
}

} // namespace mdcrow::analysis
