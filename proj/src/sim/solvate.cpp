#include "mdcrow/sim/solvate.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

namespace mdcrow::sim {

namespace {

constexpr double kAvogadroScale = 0.602214076;  // g/cm^3 * Å^3 / (g/mol) -> molecules
constexpr double kProteinDensity = 1.35;        // g/cm^3, for the excluded solute volume

chem::Atom make(const char* name, const char* element, const char* res, Eigen::Vector3d p) {
    chem::Atom a;
    a.name = name;
    a.element = element;
    a.res_name = res;
    a.hetero = true;
    a.pos = p;
    return a;
}

void center_on_mass(chem::Structure& s) {
    auto m = chem::masses(s);
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    double total = 0;
    for (std::size_t i = 0; i < s.atoms.size(); ++i) {
        c += m[i] * s.atoms[i].pos;
        total += m[i];
    }
    c /= total;
    for (auto& a : s.atoms) a.pos -= c;
}

/// Periodic cell grid for the minimum-distance test.
class Grid {
public:
    Grid(double edge, double min_distance) : edge_(edge), min2_(min_distance * min_distance) {
        n_ = std::max(1, static_cast<int>(std::floor(edge / min_distance)));
        if (n_ < 3) n_ = 1;
        cells_.resize(static_cast<std::size_t>(n_) * n_ * n_);
    }

    bool clear(const Eigen::Vector3d& p) const {
        Eigen::Vector3d w = wrap(p);
        Eigen::Vector3i c = cell(w);
        const int span = n_ == 1 ? 0 : 1;
        for (int dx = -span; dx <= span; ++dx)
            for (int dy = -span; dy <= span; ++dy)
                for (int dz = -span; dz <= span; ++dz) {
                    for (int j : cells_[index(c + Eigen::Vector3i(dx, dy, dz))]) {
                        Eigen::Vector3d d = w - points_[j];
                        for (int k = 0; k < 3; ++k) d[k] -= edge_ * std::round(d[k] / edge_);
                        if (d.squaredNorm() < min2_) return false;
                    }
                }
        return true;
    }

    void add(const Eigen::Vector3d& p) {
        Eigen::Vector3d w = wrap(p);
        cells_[index(cell(w))].push_back(static_cast<int>(points_.size()));
        points_.push_back(w);
    }

private:
    Eigen::Vector3d wrap(Eigen::Vector3d p) const {
        for (int k = 0; k < 3; ++k) p[k] -= edge_ * std::floor(p[k] / edge_);
        return p;
    }
    Eigen::Vector3i cell(const Eigen::Vector3d& w) const {
        Eigen::Vector3i c;
        for (int k = 0; k < 3; ++k) c[k] = std::min(n_ - 1, static_cast<int>(w[k] / edge_ * n_));
        return c;
    }
    std::size_t index(Eigen::Vector3i c) const {
        for (int k = 0; k < 3; ++k) c[k] = ((c[k] % n_) + n_) % n_;
        return (static_cast<std::size_t>(c[0]) * n_ + c[1]) * n_ + c[2];
    }

    double edge_;
    double min2_;
    int n_;
    std::vector<std::vector<int>> cells_;
    std::vector<Eigen::Vector3d> points_;
};

} // namespace

chem::Structure solvent_template(Solvent s) {
    chem::Structure t;
    const double deg = std::numbers::pi / 180.0;
    switch (s) {
        case Solvent::water: {
            const double r = 0.9572, th = 104.52 * deg;
            t.atoms = {make("O", "O", "HOH", {0, 0, 0}), make("H1", "H", "HOH", {r, 0, 0}),
                       make("H2", "H", "HOH", {r * std::cos(th), r * std::sin(th), 0})};
            break;
        }
        case Solvent::methanol: {
            const double th = (180.0 - 108.5) * deg;
            t.atoms = {make("CM", "C", "MOH", {0, 0, 0}), make("O", "O", "MOH", {1.43, 0, 0}),
                       make("HO", "H", "MOH", {1.43 + 0.945 * std::cos(th), 0.945 * std::sin(th), 0})};
            break;
        }
        case Solvent::acetonitrile:
            t.atoms = {make("CM", "C", "ACN", {0, 0, 0}), make("C", "C", "ACN", {1.458, 0, 0}),
                       make("N", "N", "ACN", {1.458 + 1.157, 0, 0})};
            break;
    }
    center_on_mass(t);
    return t;
}

double solvent_molar_mass(Solvent s) {
    double m = 0;
    for (double x : chem::masses(solvent_template(s))) m += x;
    return m;
}

long long molecules_for_density(double density, double volume, double molar_mass) {
    return std::llround(density * volume * kAvogadroScale / molar_mass);
}

SolvationResult solvate(const chem::Structure& solute, const SolvationSpec& spec, std::uint64_t seed) {
    if (!(spec.min_distance > 0)) throw UsageError("min_distance must be > 0 Å");

    Eigen::Vector3d lo = Eigen::Vector3d::Zero(), hi = Eigen::Vector3d::Zero();
    if (!solute.empty()) {
        lo = hi = solute.atoms[0].pos;
        for (const auto& a : solute.atoms) {
            lo = lo.cwiseMin(a.pos);
            hi = hi.cwiseMax(a.pos);
        }
    }
    const double extent = (hi - lo).maxCoeff();
    double edge = 0;
    if (spec.box_edge) {
        edge = *spec.box_edge;
        if (edge <= 0 || extent + spec.min_distance > edge)
            throw UsageError("solvation box too small: edge " + format_number(edge) + " Å cannot hold a solute " +
                             "spanning " + format_number(extent) + " Å plus min_distance " +
                             format_number(spec.min_distance) + " Å. Use a larger box_edge or give padding instead");
    } else {
        edge = extent + 2.0 * spec.padding.value_or(kDefaultPadding);
        if (edge < spec.min_distance * 3) edge = spec.min_distance * 3;
    }

    SolvationResult out;
    out.structure = solute;
    auto& st = out.structure;
    const Eigen::Vector3d shift = Eigen::Vector3d::Constant(edge / 2) - (lo + hi) / 2;
    for (auto& a : st.atoms) a.pos += shift;

    double solute_mass = 0;
    for (double m : chem::masses(solute)) solute_mass += m;
    const double volume = edge * edge * edge;
    const double free_volume = std::max(0.0, volume - solute_mass / (kProteinDensity * kAvogadroScale));
    const double molar = solvent_molar_mass(spec.solvent);
    out.target_molecules = molecules_for_density(spec.target_density, free_volume, molar);

    Grid grid(edge, spec.min_distance);
    for (const auto& a : st.atoms) grid.add(a.pos);

    const auto tmpl = solvent_template(spec.solvent);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int res_seq = 0;
    for (const auto& a : st.atoms) res_seq = std::max(res_seq, a.res_seq);

    long long rejections = 0;
    std::vector<Eigen::Vector3d> trial(tmpl.atoms.size());
    while (out.n_molecules < out.target_molecules && rejections < kMaxConsecutiveRejections) {
        ++out.attempts;
        // uniform random rotation (Shoemake)
        const double u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
        const double tp = 2 * std::numbers::pi;
        Eigen::Quaterniond q(std::sqrt(u1) * std::cos(tp * u3), std::sqrt(1 - u1) * std::sin(tp * u2),
                             std::sqrt(1 - u1) * std::cos(tp * u2), std::sqrt(u1) * std::sin(tp * u3));
        const Eigen::Matrix3d rot = q.normalized().toRotationMatrix();
        const Eigen::Vector3d com(unit(rng) * edge, unit(rng) * edge, unit(rng) * edge);

        bool ok = true;
        for (std::size_t k = 0; k < tmpl.atoms.size() && ok; ++k) {
            trial[k] = com + rot * tmpl.atoms[k].pos;
            ok = grid.clear(trial[k]);
        }
        if (!ok) {
            ++rejections;
            continue;
        }
        rejections = 0;
        ++out.n_molecules;
        res_seq = res_seq % 9999 + 1;
        for (std::size_t k = 0; k < tmpl.atoms.size(); ++k) {
            chem::Atom a = tmpl.atoms[k];
            a.pos = trial[k];
            a.res_seq = res_seq;
            a.chain = 'W';
            grid.add(a.pos);
            st.atoms.push_back(std::move(a));
        }
    }

    st.box = Eigen::Vector3d::Constant(edge);
    st.source = chem::StructureSource::solvated;
    chem::renumber(st);
    out.density = free_volume > 0 ? out.n_molecules * molar / (free_volume * kAvogadroScale) : 0.0;
    out.reached_target = out.n_molecules * 50 >= out.target_molecules * 49;
    return out;
}

} // namespace mdcrow::sim
