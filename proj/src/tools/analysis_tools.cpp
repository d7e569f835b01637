#include "common.hpp"

#include "mdcrow/analysis/figure.hpp"
#include "mdcrow/analysis/rdf.hpp"
#include "mdcrow/analysis/secondary.hpp"
#include "mdcrow/analysis/selection.hpp"
#include "mdcrow/analysis/structural.hpp"
#include "mdcrow/analysis/superpose.hpp"
#include "mdcrow/analysis/surface.hpp"
#include "mdcrow/chem/residues.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace mdcrow::tools {

using agent::ToolCategory;
using analysis::SeriesResult;
using registry::FileKind;

namespace {

std::string fmt(double v, int prec = 3) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

// Backbone when the topology has protein, otherwise every atom.
std::string default_selection(const chem::Structure& top) {
    for (const auto& a : top.atoms)
        if (chem::classify_residue(a.res_name) == chem::ResidueKind::protein) return "backbone";
    return "all";
}

std::vector<std::size_t> select(const ToolArgs& args, const chem::Structure& top) {
    const auto text = args.get("selection").value_or(default_selection(top));
    return analysis::Selection::parse(text).require(top);
}

std::string required_id(const ToolArgs& args, const char* key, const char* example) {
    const auto id = args.primary(key);
    if (!id) throw UsageError(std::string("give a file id, e.g. ") + key + "=" + example);
    return trim(*id);
}

struct Saved {
    registry::FileEntry csv, fig;
};

Saved save_series(ToolContext& ctx, const std::vector<SeriesResult>& series, const std::string& stem,
                  const std::string& title) {
    std::string csv;
    for (const auto& s : series) csv += analysis::series_csv(s);
    const auto c = detail::save_text(ctx, csv, stem, ".csv", title + " data", FileKind::other);
    const auto img = analysis::plot_series(series, title);
    const auto f = detail::save_text(ctx, img.to_ppm(), stem, ".ppm", title, FileKind::figure);
    return {c, f};
}

std::string stats(const std::vector<double>& y, const std::string& units) {
    if (y.empty()) return "no values";
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    return "first " + fmt(y.front()) + ", last " + fmt(y.back()) + ", mean " + fmt(mean) + ", min " + fmt(*lo) +
           ", max " + fmt(*hi) + " " + units;
}

std::string files_line(const Saved& s) { return "data: " + s.csv.file_id + ", figure: " + s.fig.file_id; }

} // namespace

void add_analysis_tools(agent::Toolset& set, ToolContext& ctx) {
    set.add({"ComputeRMSD", ToolCategory::analysis,
             "RMSD over time of a trajectory against a reference (first frame by default), with optimal "
             "superposition. Saves data and a plot.",
             "traj=<trj_...> [reference=<str_...>] [selection=backbone] [superpose=true]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto sel = select(args, traj.topology);
                 Eigen::Matrix3Xd ref;
                 if (auto r = args.get("reference")) {
                     const auto rs = detail::load_structure(ctx, *r);
                     if (rs.size() != traj.n_atoms())
                         throw UsageError("reference " + *r + " has " + std::to_string(rs.size()) +
                                          " atoms but trajectory " + id + " has " + std::to_string(traj.n_atoms()));
                     ref = analysis::gather<double>(rs.coordinates(), sel);
                 } else {
                     ref = analysis::gather<double>(traj.frames.front(), sel);
                 }
                 auto s = analysis::rmsd(traj, ref, sel, args.get_bool("superpose", true));
                 s.provenance = "trajectory " + id + "; selection " + args.get("selection").value_or(default_selection(traj.topology));
                 const auto saved = save_series(ctx, {s}, id + "_rmsd", "RMSD of " + id);
                 return "RMSD of " + id + " (" + std::to_string(sel.size()) + " atoms): " + stats(s.y, "A") + "\n" +
                        files_line(saved);
             }});

    set.add({"ComputeRMSF", ToolCategory::analysis,
             "Per-atom RMSF of a trajectory after superposition to the mean structure. Saves data and a plot.",
             "traj=<trj_...> [selection=ca]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto text = args.get("selection").value_or(
                     default_selection(traj.topology) == "backbone" ? "ca" : "all");
                 const auto sel = analysis::Selection::parse(text).require(traj.topology);
                 const auto v = analysis::rmsf(traj, sel, true);
                 SeriesResult s;
                 s.label = "RMSF";
                 s.x_label = "Atom";
                 s.x_units = "index";
                 s.y_units = "Angstrom";
                 s.provenance = "trajectory " + id + "; selection " + text;
                 for (std::size_t i = 0; i < v.size(); ++i) {
                     s.x.push_back(static_cast<double>(i));
                     s.y.push_back(v[i]);
                 }
                 const auto saved = save_series(ctx, {s}, id + "_rmsf", "RMSF of " + id);
                 const auto hi = std::max_element(v.begin(), v.end()) - v.begin();
                 const auto& a = traj.topology.atoms[sel[static_cast<std::size_t>(hi)]];
                 return "RMSF of " + id + " over " + std::to_string(v.size()) + " atoms: mean " +
                        fmt(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size())) +
                        " A, largest " + fmt(v[static_cast<std::size_t>(hi)]) + " A at " + a.res_name + " " +
                        std::to_string(a.res_seq) + " " + trim(a.name) + "\n" + files_line(saved);
             }});

    set.add({"ComputeRadiusofGyration", ToolCategory::analysis,
             "Radius of gyration per frame (mass-weighted by default). Saves data and a plot.",
             "traj=<trj_...> [selection=all] [mass_weighted=true]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto text = args.get("selection").value_or("protein");
                 auto sel = analysis::Selection::parse(text).apply(traj.topology);
                 if (sel.empty() && !args.has("selection")) sel = analysis::Selection::all().require(traj.topology);
                 if (sel.empty()) throw UsageError("selection '" + text + "' matches no atoms");
                 auto s = analysis::radius_of_gyration(traj, sel, args.get_bool("mass_weighted", true));
                 s.provenance = "trajectory " + id + "; selection " + text;
                 const auto saved = save_series(ctx, {s}, id + "_rgy", "Radius of gyration of " + id);
                 return "Radius of gyration of " + id + ": " + stats(s.y, "A") + "\n" + files_line(saved);
             }});

    set.add({"ComputeDSSP", ToolCategory::analysis,
             "Secondary structure (helix H, strand E, coil C) per residue. For a trajectory, reports the first "
             "and last frame and saves per-frame counts.",
             "traj=<trj_... or str_...>",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto all = analysis::secondary_structure(traj);
                 if (all.empty() || all.front().classes.empty()) throw UsageError(id + " contains no protein residues");
                 auto line = [](const analysis::SecondaryStructure& s) {
                     return "helix " + std::to_string(s.helix) + ", strand " + std::to_string(s.strand) + ", coil " +
                            std::to_string(s.coil) + " residues: " + s.classes;
                 };
                 std::string obs = "Secondary structure of " + id + ":\n";
                 if (all.size() > 1) obs += "first frame: " + line(all.front()) + "\n";
                 obs += (all.size() > 1 ? "final frame: " : "") + line(all.back()) + "\n";
                 for (const auto& w : all.back().warnings) obs += "warning: " + w + "\n";
                 if (all.size() > 1) {
                     std::vector<SeriesResult> series(3);
                     const char* names[] = {"Helix", "Strand", "Coil"};
                     for (int k = 0; k < 3; ++k) {
                         series[static_cast<std::size_t>(k)].label = names[k];
                         series[static_cast<std::size_t>(k)].y_units = "residues";
                         series[static_cast<std::size_t>(k)].provenance = "trajectory " + id;
                     }
                     for (std::size_t f = 0; f < all.size(); ++f) {
                         const int v[] = {all[f].helix, all[f].strand, all[f].coil};
                         for (int k = 0; k < 3; ++k) {
                             series[static_cast<std::size_t>(k)].x.push_back(traj.times[f]);
                             series[static_cast<std::size_t>(k)].y.push_back(v[k]);
                         }
                     }
                     obs += files_line(save_series(ctx, series, id + "_dssp", "Secondary structure of " + id));
                 }
                 return obs;
             }});

    set.add({"ComputePCA", ToolCategory::analysis,
             "Principal component analysis of atomic fluctuations. Reports eigenvalues and variance fractions "
             "and saves projections on the leading components.",
             "traj=<trj_...> [selection=backbone] [n_components=3]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto sel = select(args, traj.topology);
                 const auto r = analysis::pca(traj, sel, static_cast<int>(args.get_int("n_components", 3)));
                 std::string obs = "PCA of " + id + " (" + std::to_string(sel.size()) + " atoms, " +
                                   std::to_string(traj.n_frames()) + " frames), total variance " +
                                   fmt(r.total_variance) + " A^2:\n";
                 std::vector<SeriesResult> series;
                 for (Eigen::Index c = 0; c < r.components.rows(); ++c) {
                     const double ev = r.eigenvalues(c);
                     obs += "  PC" + std::to_string(c + 1) + ": eigenvalue " + fmt(ev) + " A^2 (" +
                            fmt(r.total_variance > 0 ? 100.0 * ev / r.total_variance : 0.0, 1) + "%)\n";
                     SeriesResult s;
                     s.label = "PC" + std::to_string(c + 1);
                     s.y_units = "Angstrom";
                     s.provenance = "trajectory " + id;
                     for (Eigen::Index f = 0; f < r.projections.rows(); ++f) {
                         s.x.push_back(traj.times[static_cast<std::size_t>(f)]);
                         s.y.push_back(r.projections(f, c));
                     }
                     series.push_back(std::move(s));
                 }
                 return obs + files_line(save_series(ctx, series, id + "_pca", "PCA projections of " + id));
             }});

    set.add({"ComputeSASA", ToolCategory::analysis,
             "Solvent accessible surface area (Shrake-Rupley, 1.4 A probe) of a structure or one trajectory "
             "frame; total and largest residue contributions.",
             "file_id=<str_... or trj_...> [frame=last] [probe=1.4] [points=960]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "file_id", "str_0001");
                 const auto traj = detail::load_frames(ctx, id);
                 std::size_t frame = traj.n_frames() - 1;
                 if (auto f = args.get("frame"); f && *f != "last") {
                     const auto k = parse_int(*f, "frame");
                     if (k < 0 || static_cast<std::size_t>(k) >= traj.n_frames())
                         throw UsageError("frame must be in [0, " + std::to_string(traj.n_frames() - 1) + "]");
                     frame = static_cast<std::size_t>(k);
                 }
                 auto s = traj.topology;
                 s.set_coordinates(traj.frames[frame]);
                 // Solvent is not part of the surface of interest.
                 chem::Structure solute = s;
                 solute.atoms.clear();
                 for (const auto& a : s.atoms) {
                     const auto k = chem::classify_residue(a.res_name);
                     if (k != chem::ResidueKind::water && k != chem::ResidueKind::solvent) solute.atoms.push_back(a);
                 }
                 const auto r = analysis::sasa(solute, args.get_double("probe", 1.4),
                                               static_cast<int>(args.get_int("points", 960)));
                 std::string obs = "SASA of " + id + " (frame " + std::to_string(frame) + "): total " +
                                   fmt(r.total, 1) + " A^2 over " + std::to_string(r.residues.size()) + " residues\n";
                 std::vector<std::size_t> order(r.per_residue.size());
                 std::iota(order.begin(), order.end(), 0);
                 std::stable_sort(order.begin(), order.end(),
                                  [&](auto a, auto b) { return r.per_residue[a] > r.per_residue[b]; });
                 obs += "most exposed residues:";
                 for (std::size_t i = 0; i < order.size() && i < 5; ++i)
                     obs += " " + r.residue_names[order[i]] + std::to_string(r.residues[order[i]].seq) + " (" +
                            fmt(r.per_residue[order[i]], 1) + ")";
                 std::string csv = "# per-residue SASA of " + id + " (A^2)\nchain,resid,resname,sasa\n";
                 for (std::size_t i = 0; i < r.per_residue.size(); ++i)
                     csv += std::string(1, r.residues[i].chain) + "," + std::to_string(r.residues[i].seq) + "," +
                            r.residue_names[i] + "," + fmt(r.per_residue[i], 4) + "\n";
                 const auto e = detail::save_text(ctx, csv, id + "_sasa", ".csv", "per-residue SASA of " + id,
                                                  FileKind::other);
                 return obs + "\ndata: " + e.file_id;
             }});

    set.add({"ComputeRDF", ToolCategory::analysis,
             "Radial distribution function g(r) between two selections of a periodic trajectory.",
             "traj=<trj_...> [sel_a=\"water and name O\"] [sel_b=<same as sel_a>] [r_max=<A, <= half box>] "
             "[bins=100]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 if (!traj.periodic) throw UsageError(id + " has no periodic box; RDF needs a solvated system");
                 const auto ta = args.get("sel_a").value_or("water and name O");
                 const auto tb = args.get("sel_b").value_or(ta);
                 const auto a = analysis::Selection::parse(ta).require(traj.topology);
                 const auto b = analysis::Selection::parse(tb).require(traj.topology);
                 double min_edge = traj.boxes.front().minCoeff();
                 for (const auto& bx : traj.boxes) min_edge = std::min(min_edge, bx.minCoeff());
                 const double r_max = args.get_double("r_max", std::min(10.0, 0.5 * min_edge));
                 const auto r = analysis::rdf(traj, a, b, r_max, static_cast<int>(args.get_int("bins", 100)));
                 SeriesResult s;
                 s.label = "g(r)";
                 s.x_label = "r";
                 s.x_units = "Angstrom";
                 s.y_units = "dimensionless";
                 s.x = r.centers;
                 s.y = r.g;
                 s.provenance = "trajectory " + id + "; A=" + ta + "; B=" + tb;
                 const auto peak = std::max_element(r.g.begin(), r.g.end()) - r.g.begin();
                 const auto saved = save_series(ctx, {s}, id + "_rdf", "RDF of " + id);
                 return "RDF of " + id + " (" + ta + " / " + tb + ", r_max " + fmt(r_max, 2) + " A): first peak g=" +
                        fmt(r.g[static_cast<std::size_t>(peak)]) + " at r=" +
                        fmt(r.centers[static_cast<std::size_t>(peak)], 2) + " A\n" + files_line(saved);
             }});

    set.add({"MomentOfInertia", ToolCategory::analysis,
             "Principal moments of inertia per frame (amu*A^2). Saves data and a plot.",
             "traj=<trj_...> [selection=all]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "traj", "trj_0002");
                 const auto traj = detail::load_frames(ctx, id);
                 const auto text = args.get("selection").value_or("all");
                 const auto sel = analysis::Selection::parse(text).require(traj.topology);
                 auto m = analysis::moments_of_inertia(traj, sel);
                 std::vector<SeriesResult> v(m.begin(), m.end());
                 std::string obs = "Moments of inertia of " + id + ":\n";
                 for (auto& s : v) {
                     s.provenance = "trajectory " + id + "; selection " + text;
                     obs += "  " + s.label + ": " + stats(s.y, "amu*A^2") + "\n";
                 }
                 return obs + files_line(save_series(ctx, v, id + "_moi", "Moments of inertia of " + id));
             }});

    set.add({"PlotStateLog", ToolCategory::analysis,
             "Plot a column of a simulation state log (PE, KE, T or V) over time.",
             "log=<log_...> [column=T]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = required_id(args, "log", "log_0003");
                 const auto e = detail::files(ctx).get(id);
                 if (e.kind != FileKind::state_log) throw UsageError(id + " is not a state log (log_...)");
                 const auto rows = sim::parse_state_log_csv(read_file(detail::files(ctx).resolve(id).string()));
                 const auto col = to_upper(args.get("column").value_or("T"));
                 SeriesResult s;
                 s.provenance = "state log " + id;
                 if (col == "T") { s.label = "Temperature"; s.y_units = "K"; }
                 else if (col == "PE") { s.label = "Potential energy"; s.y_units = "kcal/mol"; }
                 else if (col == "KE") { s.label = "Kinetic energy"; s.y_units = "kcal/mol"; }
                 else if (col == "V") { s.label = "Volume"; s.y_units = "A^3"; }
                 else throw UsageError("column must be one of PE, KE, T, V (got '" + col + "')");
                 for (const auto& r : rows) {
                     s.x.push_back(r.time_ps);
                     s.y.push_back(col == "T" ? r.temperature : col == "PE" ? r.potential
                                                              : col == "KE" ? r.kinetic : r.volume);
                 }
                 const auto saved = save_series(ctx, {s}, id + "_" + to_lower(col), s.label + " from " + id);
                 return s.label + " from " + id + ": " + stats(s.y, s.y_units) + "\n" + files_line(saved);
             }});
}

void add_meta_tools(agent::Toolset& set, ToolContext& ctx) {
    set.add({"ListRegistryPaths", ToolCategory::meta,
             "List every registered file with its id, kind, creating step and description.", "(no input)",
             [&ctx](const std::string&) {
                 const auto d = detail::files(ctx).describe_all();
                 return d.empty() ? std::string("no files registered yet") : d;
             }});
}

} // namespace mdcrow::tools
