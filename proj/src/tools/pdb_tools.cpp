#include "common.hpp"

#include "mdcrow/chem/builder.hpp"
#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/pdb/clean.hpp"
#include "mdcrow/pdb/summary.hpp"

namespace mdcrow::tools {

using agent::ToolCategory;
using registry::FileKind;

void add_pdb_tools(agent::Toolset& set, ToolContext& ctx) {
    set.add({"PDBFileDownloader", ToolCategory::pdb_protein,
             "Download a structure from the Protein Data Bank by its 4-character id and register it.",
             "<PDB id>, e.g. 1LYZ",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("pdb_id");
                 if (!id) throw UsageError("give a PDB id, e.g. 1LYZ");
                 const auto s = pdb::fetch_structure(*id, ctx.pdb);
                 const auto e = detail::save_structure(ctx, s, to_upper(*id) + "_raw",
                                                       "PDB entry " + to_upper(*id) + " as downloaded");
                 const auto m = pdb::summarize_structure(s);
                 return "Downloaded " + to_upper(*id) + " as " + e.file_id + " (" + std::to_string(m.atoms) +
                        " atoms, " + std::to_string(m.chains) + " chains).";
             }});

    set.add({"CleaningToolFunction", ToolCategory::pdb_protein,
             "Clean a structure: remove heterogens, add missing heavy atoms, add hydrogens for a pH.",
             "file_id=<str_...> [pH=7.0] [remove_heterogens=true] [keep_water=false] [add_missing_atoms=true] "
             "[add_hydrogens=true]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("file_id");
                 if (!id) throw UsageError("give the structure file id, e.g. file_id=str_0001");
                 pdb::CleanSpec spec;
                 spec.target_ph = args.get_double("pH", args.get_double("ph", 7.0));
                 spec.remove_heterogens = args.get_bool("remove_heterogens", true);
                 spec.keep_water = args.get_bool("keep_water", false);
                 spec.add_missing_heavy_atoms = args.get_bool("add_missing_atoms", true);
                 spec.add_hydrogens = args.get_bool("add_hydrogens", true);
                 const auto s = detail::load_structure(ctx, *id);
                 const auto r = pdb::clean_structure(s, spec);
                 const auto e = detail::save_structure(ctx, r.structure, *id + "_clean",
                                                       "cleaned " + *id + " at pH " + format_number(spec.target_ph));
                 std::string obs = "Cleaned " + *id + " -> " + e.file_id + ": removed " +
                                   std::to_string(r.removed_atoms) + " heterogen atoms, added " +
                                   std::to_string(r.added_heavy_atoms) + " heavy atoms and " +
                                   std::to_string(r.added_hydrogens) + " hydrogens at pH " +
                                   format_number(spec.target_ph) + ".";
                 for (const auto& w : r.warnings) obs += "\nwarning: " + w;
                 return obs;
             }});

    set.add({"SummarizeProteinStructure", ToolCategory::pdb_protein,
             "Count atoms, residues, chains, waters, ions and heterogens of a structure or trajectory topology.",
             "file_id=<str_... or trj_...>",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("file_id");
                 if (!id) throw UsageError("give a file id, e.g. file_id=str_0001");
                 return pdb::format_summary(pdb::summarize_structure(detail::load_structure(ctx, *id)));
             }});

    set.add({"VisualizeProtein", ToolCategory::pdb_protein,
             "Render a static image of a structure (orthographic, element-coloured atoms) and register it.",
             "file_id=<str_...> [width=480] [height=480]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("file_id");
                 if (!id) throw UsageError("give a file id, e.g. file_id=str_0001");
                 const auto img = pdb::render_structure(detail::load_structure(ctx, *id),
                                                        static_cast<int>(args.get_int("width", 480)),
                                                        static_cast<int>(args.get_int("height", 480)));
                 const auto e = detail::save_text(ctx, img.to_ppm(), *id + "_view", ".ppm",
                                                  "rendering of " + *id, FileKind::figure);
                 return "Saved visualization of " + *id + " as " + e.file_id + ".";
             }});

    set.add({"GetProteinSequence", ToolCategory::pdb_protein,
             "One-letter sequence of each protein chain in a structure.", "file_id=<str_...>",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("file_id");
                 if (!id) throw UsageError("give a file id, e.g. file_id=str_0001");
                 const auto m = pdb::summarize_structure(detail::load_structure(ctx, *id));
                 std::string out;
                 for (const auto& c : m.chain_details)
                     if (!c.sequence.empty())
                         out += "chain " + std::string(1, c.id) + " (" + std::to_string(c.sequence.size()) +
                                " residues): " + c.sequence + "\n";
                 return out.empty() ? std::string("no protein chains in " + *id) : out;
             }});

    set.add({"BuildPeptide", ToolCategory::pdb_protein,
             "Build an idealized alpha-helical peptide from a one-letter sequence and register it.",
             "sequence=<letters> [extended=false]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto seq = args.primary("sequence");
                 if (!seq || seq->empty()) throw UsageError("give a sequence, e.g. sequence=AAAAA");
                 std::vector<chem::BackboneAngles> angles;
                 if (args.get_bool("extended", false)) angles.assign(seq->size(), {-120.0, 120.0, 180.0});
                 auto s = chem::build_peptide(to_upper(*seq), angles);
                 s.source = chem::StructureSource::generated;
                 const auto e = detail::save_structure(ctx, s, "peptide", "peptide " + to_upper(*seq));
                 return "Built peptide " + to_upper(*seq) + " (" + std::to_string(s.size()) + " atoms) as " +
                        e.file_id + ".";
             }});
}

} // namespace mdcrow::tools
