#include "support.hpp"

#include "mdcrow/analysis/figure.hpp"
#include "mdcrow/analysis/rdf.hpp"
#include "mdcrow/analysis/secondary.hpp"
#include "mdcrow/analysis/selection.hpp"
#include "mdcrow/analysis/series.hpp"
#include "mdcrow/analysis/structural.hpp"
#include "mdcrow/analysis/superpose.hpp"
#include "mdcrow/analysis/surface.hpp"
#include "mdcrow/chem/builder.hpp"
#include "mdcrow/chem/elements.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace mdcrow;
using namespace mdcrow::analysis;

namespace {

chem::Structure atoms_at(const Eigen::Matrix3Xd& x, const std::string& element = "C") {
    chem::Structure s;
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        chem::Atom a;
        a.serial = static_cast<int>(i + 1);
        a.name = element;
        a.element = element;
        a.res_name = "UNK";
        a.res_seq = static_cast<int>(i + 1);
        a.pos = x.col(i);
        s.atoms.push_back(a);
    }
    return s;
}

sim::Trajectory make_traj(const std::vector<Eigen::Matrix3Xd>& frames, const std::string& element = "C") {
    sim::Trajectory t;
    t.topology = atoms_at(frames.front(), element);
    t.frames = frames;
    for (std::size_t f = 0; f < frames.size(); ++f) t.times.push_back(static_cast<double>(f));
    t.frame_interval_ps = 1.0;
    return t;
}

std::vector<std::size_t> all_of(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
    return q.normalized().toRotationMatrix();
}

Eigen::Matrix3Xd random_cloud(std::mt19937_64& rng, int n, double spread = 5.0) {
    std::uniform_real_distribution<double> u(-spread, spread);
    Eigen::Matrix3Xd x(3, n);
    for (int i = 0; i < n; ++i) x.col(i) << u(rng), u(rng), u(rng);
    return x;
}

std::vector<Eigen::Matrix3Xd> random_walk(std::mt19937_64& rng, int n_atoms, int n_frames) {
    std::normal_distribution<double> g(0.0, 0.3);
    std::vector<Eigen::Matrix3Xd> frames{random_cloud(rng, n_atoms)};
    for (int f = 1; f < n_frames; ++f) {
        Eigen::Matrix3Xd next = frames.back();
        for (int i = 0; i < n_atoms; ++i) next.col(i) += Eigen::Vector3d(g(rng), g(rng), g(rng));
        frames.push_back(next);
    }
    return frames;
}

}  // namespace

TEST_CASE("rmsd") {
    std::mt19937_64 rng(1);
    const auto frames = random_walk(rng, 30, 6);
    const auto traj = make_traj(frames);
    const auto sel = all_of(30);

    const auto self = rmsd(make_traj({frames[0], frames[0], frames[0]}), frames[0], sel, true);
    for (double v : self.y) CHECK(std::abs(v) < 1e-12);
    CHECK(self.y_units == "Angstrom");

    // Rigid motion of the reference frame vanishes under superposition.
    const Eigen::Matrix3d r = random_rotation(rng);
    Eigen::Matrix3Xd moved = (r * frames[0]).colwise() + Eigen::Vector3d(3, -7, 11);
    CHECK(rmsd(make_traj({moved}), frames[0], sel, true).y[0] < 1e-6);

    Eigen::Matrix3Xd shifted = frames[0].colwise() + Eigen::Vector3d(1, 0, 0);
    CHECK(rmsd(make_traj({shifted}), frames[0], sel, false).y[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rmsd(make_traj({shifted}), frames[0], sel, true).y[0] < 1e-9);

    // Brute force without superposition.
    const auto plain = rmsd(traj, frames[0], sel, false);
    for (std::size_t f = 0; f < frames.size(); ++f) {
        double acc = 0;
        for (int i = 0; i < 30; ++i) acc += (frames[f].col(i) - frames[0].col(i)).squaredNorm();
        CHECK(plain.y[f] == doctest::Approx(std::sqrt(acc / 30)).epsilon(1e-12));
    }
    // Superposed never exceeds plain.
    const auto fit = rmsd(traj, frames[0], sel, true);
    for (std::size_t f = 0; f < frames.size(); ++f) CHECK(fit.y[f] <= plain.y[f] + 1e-12);

    CHECK_THROWS_AS(rmsd(traj, frames[0].leftCols(10), sel, true), UsageError);
    CHECK_THROWS_AS(rmsd(traj, frames[0], {}, true), UsageError);
}

TEST_CASE("kabsch returns a proper rotation") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_cloud(rng, 12);
        Eigen::Matrix3Xd b = random_cloud(rng, 12);
        if (trial % 2) b.row(0) *= -1;  // mirror
        const Eigen::Matrix3Xd ac = a.colwise() - centroid<double>(a);
        const Eigen::Matrix3Xd bc = b.colwise() - centroid<double>(b);
        const Eigen::Matrix3d r = kabsch_rotation<double>(ac, bc);
        CHECK((r * r.transpose() - Eigen::Matrix3d::Identity()).norm() < 1e-10);
        CHECK(r.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("rmsf") {
    std::mt19937_64 rng(3);
    const auto base = random_cloud(rng, 10);
    const auto sel = all_of(10);
    for (double v : rmsf(make_traj({base, base, base}), sel, false)) CHECK(std::abs(v) < 1e-12);

    // Atom 0 at +a and -a about its mean along x.
    const double a = 0.7;
    Eigen::Matrix3Xd p = base, m = base;
    p(0, 0) += a;
    m(0, 0) -= a;
    const auto two = rmsf(make_traj({p, m}), sel, false);
    CHECK(two[0] == doctest::Approx(a).epsilon(1e-12));
    for (int i = 1; i < 10; ++i) CHECK(two[static_cast<std::size_t>(i)] == 0.0);

    const auto frames = random_walk(rng, 20, 15);
    const auto got = rmsf(make_traj(frames), all_of(20), false);
    for (int i = 0; i < 20; ++i) {
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& f : frames) mean += f.col(i);
        mean /= 15.0;
        double acc = 0;
        for (const auto& f : frames) acc += (f.col(i) - mean).squaredNorm();
        CHECK(got[static_cast<std::size_t>(i)] == doctest::Approx(std::sqrt(acc / 15.0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(rmsf(make_traj({base}), sel, false), UsageError);
}

TEST_CASE("radius of gyration") {
    Eigen::Matrix3Xd one(3, 1);
    one << 4, 5, 6;
    CHECK(std::abs(radius_of_gyration(make_traj({one}), {0}, true).y[0]) < 1e-12);

    Eigen::Matrix3Xd pair(3, 2);
    pair << 0, 2, 0, 0, 0, 0;
    CHECK(radius_of_gyration(make_traj({pair}), {0, 1}, false).y[0] == doctest::Approx(1.0).epsilon(1e-12));

    std::mt19937_64 rng(4);
    const auto x = random_cloud(rng, 40);
    auto traj = make_traj({x});
    for (std::size_t i = 0; i < 40; ++i) traj.topology.atoms[i].element = i % 3 ? "C" : "O";
    double mtot = 0, acc = 0;
    Eigen::Vector3d com = Eigen::Vector3d::Zero();
    for (int i = 0; i < 40; ++i) {
        const double m = chem::element_mass(traj.topology.atoms[static_cast<std::size_t>(i)].element);
        mtot += m;
        com += m * x.col(i);
    }
    com /= mtot;
    for (int i = 0; i < 40; ++i)
        acc += chem::element_mass(traj.topology.atoms[static_cast<std::size_t>(i)].element) *
               (x.col(i) - com).squaredNorm();
    CHECK(radius_of_gyration(traj, all_of(40), true).y[0] == doctest::Approx(std::sqrt(acc / mtot)).epsilon(1e-10));
}

TEST_CASE("moments of inertia") {
    Eigen::Matrix3Xd one(3, 1);
    one << 1, 2, 3;
    for (const auto& s : moments_of_inertia(make_traj({one}), {0})) CHECK(std::abs(s.y[0]) < 1e-12);

    // Two unit masses at distance 2: (0, 2, 2).
    Eigen::Matrix3Xd pair(3, 2);
    pair << -1, 1, 0, 0, 0, 0;
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
    const Eigen::Vector3d pm = principal_moments<double>(pair, w);
    CHECK(std::abs(pm(0)) < 1e-12);
    CHECK(pm(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pm(2) == doctest::Approx(2.0).epsilon(1e-12));

    std::mt19937_64 rng(5);
    const auto x = random_cloud(rng, 25);
    const auto traj = make_traj({x});
    const auto series = moments_of_inertia(traj, all_of(25));
    const double m = chem::element_mass("C");
    Eigen::Vector3d com = x.rowwise().mean();
    Eigen::Matrix3d inertia = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 25; ++i) {
        const Eigen::Vector3d r = x.col(i) - com;
        inertia(0, 0) += m * (r.y() * r.y() + r.z() * r.z());
        inertia(1, 1) += m * (r.x() * r.x() + r.z() * r.z());
        inertia(2, 2) += m * (r.x() * r.x() + r.y() * r.y());
        inertia(0, 1) -= m * r.x() * r.y();
        inertia(0, 2) -= m * r.x() * r.z();
        inertia(1, 2) -= m * r.y() * r.z();
    }
    inertia(1, 0) = inertia(0, 1);
    inertia(2, 0) = inertia(0, 2);
    inertia(2, 1) = inertia(1, 2);
    // Characteristic-polynomial invariants instead of a second eigensolver.
    const double a = series[0].y[0], b = series[1].y[0], c = series[2].y[0];
    CHECK(a <= b);
    CHECK(b <= c);
    CHECK(a + b + c == doctest::Approx(inertia.trace()).epsilon(1e-8));
    CHECK(a * b * c == doctest::Approx(inertia.determinant()).epsilon(1e-8));
    const double pairs = inertia(0, 0) * inertia(1, 1) + inertia(0, 0) * inertia(2, 2) + inertia(1, 1) * inertia(2, 2) -
                         inertia(0, 1) * inertia(0, 1) - inertia(0, 2) * inertia(0, 2) - inertia(1, 2) * inertia(1, 2);
    CHECK(a * b + a * c + b * c == doctest::Approx(pairs).epsilon(1e-8));
}

TEST_CASE("secondary structure") {
    const auto helix = secondary_structure(chem::build_ideal_helix(30));
    CHECK(helix.classes.size() == 30);
    CHECK(helix.helix >= 27);
    CHECK(helix.helix + helix.strand + helix.coil == 30);

    std::vector<chem::BackboneAngles> extended(12, chem::BackboneAngles{-120.0, 130.0, 180.0});
    const auto ext = secondary_structure(chem::build_peptide("GAVLIGAVLIGA", extended));
    CHECK(ext.classes == std::string(12, 'C'));

    const auto two = secondary_structure(chem::build_peptide("GA", {}));
    CHECK(two.classes == "CC");

    // Kabsch-Sander energy of a textbook N-H...O=C geometry is strongly negative.
    CHECK(hbond_energy({0, 0, 0}, {1, 0, 0}, {4.1, 0, 0}, {2.9, 0, 0}) < -0.5);
}

TEST_CASE("pca") {
    std::mt19937_64 rng(6);
    const auto base = random_cloud(rng, 8);
    const auto sel = all_of(8);

    const auto still = pca(make_traj({base, base, base, base}), sel, 3);
    CHECK(still.eigenvalues.cwiseAbs().maxCoeff() < 1e-18);
    CHECK(still.total_variance < 1e-18);

    // One atom oscillating along one axis.
    std::vector<Eigen::Matrix3Xd> frames;
    for (int f = 0; f < 40; ++f) {
        Eigen::Matrix3Xd x = base;
        x(0, 0) += 0.5 * std::sin(0.7 * f);
        frames.push_back(x);
    }
    const auto one = pca(make_traj(frames), sel, 3);
    CHECK(one.eigenvalues(0) / one.total_variance > 0.9);

    const auto walk = pca(make_traj(random_walk(rng, 12, 30)), all_of(12), 5);
    for (const auto* r : {&one, &walk}) {
        CHECK(r->eigenvalues.sum() == doctest::Approx(r->total_variance).epsilon(1e-8));
        for (Eigen::Index i = 1; i < r->eigenvalues.size(); ++i) CHECK(r->eigenvalues(i) <= r->eigenvalues(i - 1));
        for (Eigen::Index c = 0; c < r->components.rows(); ++c) {
            CHECK(r->components.row(c).norm() == doctest::Approx(1.0).epsilon(1e-10));
            Eigen::Index arg = 0;
            r->components.row(c).cwiseAbs().maxCoeff(&arg);
            CHECK(r->components(c, arg) > 0);
            // Projection variance is the eigenvalue.
            const double var = r->projections.col(c).squaredNorm() / static_cast<double>(r->projections.rows());
            CHECK(var == doctest::Approx(r->eigenvalues(c)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(pca(make_traj({base}), sel, 2), UsageError);
}

TEST_CASE("sasa") {
    Eigen::Matrix3Xd one = Eigen::Matrix3Xd::Zero(3, 1);
    const auto lone = sasa(atoms_at(one), 1.4, 960);
    CHECK(lone.total == doctest::Approx(4 * std::numbers::pi * 3.1 * 3.1).epsilon(1e-9));
    CHECK(lone.total == doctest::Approx(120.76).epsilon(0.02));

    // Centre atom of a tight shell is buried.
    Eigen::Matrix3Xd shell(3, 7);
    shell << 0, 1.5, -1.5, 0, 0, 0, 0, 0, 0, 0, 1.5, -1.5, 0, 0, 0, 0, 0, 0, 0, 1.5, -1.5;
    CHECK(sasa(atoms_at(shell), 1.4, 960).per_atom[0] < 1.0);

    // Two overlapping spheres: exposed area from the exact cap formula.
    for (double d : {2.0, 3.5, 5.0}) {
        Eigen::Matrix3Xd pair = Eigen::Matrix3Xd::Zero(3, 2);
        pair(0, 1) = d;
        auto s = atoms_at(pair);
        s.atoms[1].element = "N";
        const double ri = chem::vdw_radius("C") + 1.4, rj = chem::vdw_radius("N") + 1.4;
        auto exposed = [d](double r1, double r2) {
            const double h = r1 - (d * d + r1 * r1 - r2 * r2) / (2 * d);
            return 4 * std::numbers::pi * r1 * r1 - 2 * std::numbers::pi * r1 * h;
        };
        const auto got = sasa(s, 1.4, 960);
        CHECK(got.per_atom[0] == doctest::Approx(exposed(ri, rj)).epsilon(0.02));
        CHECK(got.per_atom[1] == doctest::Approx(exposed(rj, ri)).epsilon(0.02));
    }

    auto bad = atoms_at(one, "Xq");
    CHECK_THROWS(sasa(bad));

    const auto pep = sasa(chem::build_peptide("GAVK", {}));
    CHECK(pep.per_residue.size() == 4);
    CHECK(std::accumulate(pep.per_residue.begin(), pep.per_residue.end(), 0.0) ==
          doctest::Approx(pep.total).epsilon(1e-12));
}

TEST_CASE("rdf") {
    std::mt19937_64 rng(7);
    const double edge = 30.0;
    std::uniform_real_distribution<double> u(0.0, edge);
    std::vector<Eigen::Matrix3Xd> frames;
    for (int f = 0; f < 60; ++f) {
        Eigen::Matrix3Xd x(3, 500);
        for (int i = 0; i < 500; ++i) x.col(i) << u(rng), u(rng), u(rng);
        frames.push_back(x);
    }
    auto gas = make_traj(frames);
    gas.periodic = true;
    gas.boxes.assign(frames.size(), Eigen::Vector3d::Constant(edge));
    const auto sel = all_of(500);
    const auto r = rdf(gas, sel, sel, 10.0, 40);
    for (std::size_t b = 0; b < r.g.size(); ++b)
        if (r.centers[b] > 2.0) CHECK(r.g[b] == doctest::Approx(1.0).epsilon(0.05));

    // Counts recovered from g.
    double total = 0;
    for (std::size_t b = 0; b < r.g.size(); ++b) {
        const double shell = 4.0 / 3.0 * std::numbers::pi * (std::pow(r.edges[b + 1], 3) - std::pow(r.edges[b], 3));
        CHECK(r.g[b] * r.density * shell * static_cast<double>(r.n_frames * r.n_reference) ==
              doctest::Approx(r.counts[b]).epsilon(1e-6));
        total += r.counts[b];
    }
    CHECK(total > 0);

    // One pair at 3.3 Å lands in one bin, counted from both sides.
    Eigen::Matrix3Xd pair(3, 2);
    pair << 1, 4.3, 1, 1, 1, 1;
    auto duo = make_traj({pair});
    duo.periodic = true;
    duo.boxes = {Eigen::Vector3d::Constant(20.0)};
    const auto p = rdf(duo, {0, 1}, {0, 1}, 5.0, 10);
    for (std::size_t b = 0; b < 10; ++b) CHECK(p.counts[b] == (b == 6 ? 2.0 : 0.0));
    // Across the boundary under the minimum image.
    pair(0, 1) = 19.5;
    duo.frames = {pair};
    CHECK(rdf(duo, {0}, {1}, 5.0, 10).counts[3] == 1.0);

    CHECK_THROWS_AS(rdf(gas, sel, {}, 10.0, 40), UsageError);
    CHECK_THROWS_AS(rdf(gas, sel, sel, 15.5, 40), UsageError);
    CHECK_THROWS_AS(rdf(make_traj(frames), sel, sel, 10.0, 40), UsageError);
}

TEST_CASE("property: rigid motion leaves internal measures unchanged") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto frames = random_walk(rng, 15, 6);
        const Eigen::Matrix3d r = random_rotation(rng);
        const Eigen::Vector3d t(10 * trial, -3, 2);
        std::vector<Eigen::Matrix3Xd> moved;
        for (const auto& f : frames) moved.push_back((r * f).colwise() + t);
        const auto a = make_traj(frames), b = make_traj(moved);
        const auto sel = all_of(15);
        const auto ra = rmsd(a, frames[0], sel, true), rb = rmsd(b, moved[0], sel, true);
        const auto ga = radius_of_gyration(a, sel, true), gb = radius_of_gyration(b, sel, true);
        const auto ma = moments_of_inertia(a, sel), mb = moments_of_inertia(b, sel);
        const auto fa = rmsf(a, sel, true), fb = rmsf(b, sel, true);
        for (std::size_t f = 0; f < frames.size(); ++f) {
            CHECK(ra.y[f] == doctest::Approx(rb.y[f]).epsilon(1e-8).scale(1.0));
            CHECK(ga.y[f] == doctest::Approx(gb.y[f]).epsilon(1e-10));
            for (int k = 0; k < 3; ++k) CHECK(ma[k].y[f] == doctest::Approx(mb[k].y[f]).epsilon(1e-8));
        }
        for (std::size_t i = 0; i < fa.size(); ++i) CHECK(fa[i] == doctest::Approx(fb[i]).epsilon(1e-6).scale(1.0));
    }
    const auto helix = chem::build_ideal_helix(16);
    auto turned = helix;
    const Eigen::Matrix3d r = random_rotation(rng);
    for (auto& a : turned.atoms) a.pos = r * a.pos + Eigen::Vector3d(5, 5, 5);
    CHECK(secondary_structure(helix).classes == secondary_structure(turned).classes);
    CHECK(sasa(helix).total == doctest::Approx(sasa(turned).total).epsilon(0.01));
}

TEST_CASE("selections") {
    const auto pep = chem::build_peptide("GAVK", {});
    const auto ca = Selection::parse("ca").apply(pep);
    CHECK(ca.size() == 4);
    const auto bb = Selection::parse("backbone").apply(pep);
    CHECK(bb.size() == 16);
    CHECK(Selection::parse("resid 2-3 and ca").apply(pep).size() == 2);
    CHECK(Selection::parse("not ca").apply(pep).size() == pep.size() - 4);
    CHECK_THROWS_AS(Selection::parse("water").require(pep), UsageError);
    CHECK_THROWS_AS(Selection::parse("wibble"), UsageError);
}

TEST_CASE("series csv and plots") {
    SeriesResult s;
    s.label = "RMSD";
    s.y_units = "Angstrom";
    s.provenance = "trajectory trj_0002; selection backbone";
    s.x = {0.0, 0.1, 0.2};
    s.y = {0.0, 0.125, 1.0 / 3.0};
    const auto back = parse_series_csv(series_csv(s));
    CHECK(back.label == s.label);
    CHECK(back.y_units == s.y_units);
    CHECK(back.x_units == s.x_units);
    CHECK(back.provenance == s.provenance);
    CHECK(back.x == s.x);
    CHECK(back.y == s.y);

    const auto img = plot_series({s}, "RMSD of trj_0002");
    CHECK(img.width() > 100);
    CHECK(img.to_ppm() == plot_series({s}, "RMSD of trj_0002").to_ppm());

    auto other = s;
    other.label = "Rg";
    other.y_units = "nm";
    CHECK_THROWS_WITH_AS(plot_series({s, other}, "x"), doctest::Contains("units differ"), UsageError);
    auto frames = s;
    frames.x_units = "frame";
    CHECK_THROWS_AS(plot_series({s, frames}, "x"), UsageError);
}

TEST_CASE("analysis tools register figures") {
    testing::TempDir dir("analysis");
    registry::FileRegistry files(dir.path());
    sim::ToyEngine engine;
    auto ctx = tools::fixture_context(files, engine, nullptr);
    auto set = tools::build_toolset(ctx);
    auto call = [&](const std::string& tool, const std::string& in) {
        const auto d = agent::dispatch_tool(agent::AgentAction::call("", tool, in), set);
        INFO(tool << ": " << d.observation);
        REQUIRE_FALSE(d.error);
        return d.observation;
    };
    call("BuildPeptide", "sequence=GAVKL");
    call("SetUpandRunFunction", "structure=str_0001 n_steps=200 timestep=1 record_interval=20 seed=3");
    call("ComputeRMSD", "traj=trj_0002");
    call("ComputeRadiusofGyration", "traj=trj_0002");
    call("PlotStateLog", "log=log_0003 column=T");
    int figures = 0;
    for (const auto& e : files.entries()) figures += e.kind == registry::FileKind::figure;
    CHECK(figures >= 3);
}
