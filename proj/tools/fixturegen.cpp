// Regenerates the synthetic fixtures under the data directory.
#include "mdcrow/chem/builder.hpp"
#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/eval/grades.hpp"
#include "mdcrow/eval/tasks.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <zlib.h>

#include <iostream>
#include <random>
#include <set>

using namespace mdcrow;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ChainDef {
    char id;
    std::string seq;
    int helix = 12;  // residues per helical block
    int coil = 4;    // residues per linker
};

struct Het {
    std::string name;  // HEM, SO4, or an ion (NA, CL, ZN, CA)
    int count = 1;
};

struct FixtureDef {
    std::string id;
    std::string title;
    std::vector<ChainDef> chains;
    int waters = 0;
    std::vector<Het> hets;
    std::vector<int> truncated;  // 0-based residue indices in chain 1 with side chains cut at CB
};

std::vector<chem::BackboneAngles> angles_for(const ChainDef& c) {
    std::vector<chem::BackboneAngles> out;
    const int period = c.helix + c.coil;
    for (size_t i = 0; i < c.seq.size(); ++i) {
        const int k = static_cast<int>(i) % period;
        if (k < c.helix)
            out.push_back({-57.0, -47.0, 180.0});
        else
            out.push_back({-75.0, 145.0, 180.0});
    }
    return out;
}

double min_distance(const chem::Structure& s, const Eigen::Vector3d& p) {
    double best = 1e30;
    for (const auto& a : s.atoms) best = std::min(best, (a.pos - p).norm());
    return best;
}

// Deterministic position in the first hydration shell.
Eigen::Vector3d shell_point(const chem::Structure& s, std::mt19937& rng, double lo, double hi) {
    Eigen::Vector3d mn = s.atoms.front().pos, mx = mn;
    for (const auto& a : s.atoms) {
        mn = mn.cwiseMin(a.pos);
        mx = mx.cwiseMax(a.pos);
    }
    mn.array() -= hi;
    mx.array() += hi;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int tries = 0; tries < 200000; ++tries) {
        Eigen::Vector3d p;
        for (int d = 0; d < 3; ++d) p(d) = mn(d) + u(rng) * (mx(d) - mn(d));
        const double d = min_distance(s, p);
        if (d >= lo && d <= hi) return p;
    }
    throw Error("could not place a shell point");
}

chem::Atom het_atom(const std::string& name, const std::string& element, const std::string& res, char chain,
                    int seq, const Eigen::Vector3d& pos) {
    chem::Atom a;
    a.name = name;
    a.element = element;
    a.res_name = res;
    a.res_seq = seq;
    a.chain = chain;
    a.hetero = true;
    a.pos = pos;
    return a;
}

chem::Structure build_fixture(const FixtureDef& f, unsigned seed) {
    chem::Structure s;
    double x_cursor = 0.0;
    for (size_t ci = 0; ci < f.chains.size(); ++ci) {
        const auto& c = f.chains[ci];
        auto part = chem::build_peptide(c.seq, angles_for(c), c.id, 1);
        Eigen::Matrix3Xd xyz = part.coordinates();
        const Eigen::Vector3d centroid = xyz.rowwise().mean();
        xyz.colwise() -= centroid;
        const double lo = xyz.row(0).minCoeff(), hi = xyz.row(0).maxCoeff();
        const double shift = ci == 0 ? 0.0 : x_cursor - lo + 8.0;
        xyz.row(0).array() += shift;
        x_cursor = shift + hi;
        part.set_coordinates(xyz);
        if (ci == 0 && !f.truncated.empty()) {
            const auto res = chem::residues(part);
            std::set<std::size_t> drop;
            static const std::set<std::string> keep{"N", "CA", "C", "O", "CB"};
            for (int r : f.truncated)
                for (auto i : res.at(static_cast<size_t>(r)).atoms)
                    if (!keep.count(part.atoms[i].name)) drop.insert(i);
            std::vector<chem::Atom> kept;
            for (size_t i = 0; i < part.atoms.size(); ++i)
                if (!drop.count(i)) kept.push_back(part.atoms[i]);
            part.atoms = kept;
        }
        for (auto& a : part.atoms) s.atoms.push_back(a);
    }

    std::mt19937 rng(seed);
    const char het_chain = f.chains.front().id;
    int het_seq = 500;
    for (const auto& h : f.hets) {
        for (int k = 0; k < h.count; ++k) {
            const Eigen::Vector3d p = shell_point(s, rng, 4.0, 6.0);
            const int seq = het_seq++;
            if (h.name == "HEM") {
                s.atoms.push_back(het_atom("FE", "FE", "HEM", het_chain, seq, p));
                const double r = 2.0;
                const char* names[] = {"NA", "NB", "NC", "ND"};
                for (int i = 0; i < 4; ++i) {
                    const double t = i * M_PI / 2.0;
                    s.atoms.push_back(het_atom(names[i], "N", "HEM", het_chain, seq,
                                               p + Eigen::Vector3d(r * std::cos(t), r * std::sin(t), 0.0)));
                }
            } else if (h.name == "SO4") {
                s.atoms.push_back(het_atom("S", "S", "SO4", het_chain, seq, p));
                const double b = 1.49 / std::sqrt(3.0);
                const Eigen::Vector3d dirs[] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
                const char* names[] = {"O1", "O2", "O3", "O4"};
                for (int i = 0; i < 4; ++i) s.atoms.push_back(het_atom(names[i], "O", "SO4", het_chain, seq, p + b * dirs[i]));
            } else {
                s.atoms.push_back(het_atom(h.name, h.name, h.name, het_chain, seq, p));
            }
        }
    }
    for (int w = 0; w < f.waters; ++w)
        s.atoms.push_back(het_atom("O", "O", "HOH", het_chain, 600 + w, shell_point(s, rng, 2.7, 4.0)));
    chem::renumber(s);
    s.source = chem::StructureSource::fetched;
    return s;
}

// Short synthetic stand-ins; only 1LYZ, 1VII, 1UBQ and 1ZNI carry the real sequence.
std::vector<FixtureDef> fixture_table() {
    const std::string lyz =
        "KVFGRCELAAAMKRHGLDNYRGYSLGNWVCAAKFESNFNTQATNRNTDGSTDYGILQINSRWWCNDGRTPGSRNLCNIPCSALLSSDITASVNCAKKIVSDGNG"
        "MNAWVAWRNRCKGTDVQAWIRGCRL";
    const std::string hba = "VLSPADKTNVKAAWGKVGAHAGEYGAEALERMFLSFPTTK";
    const std::string hbb = "VHLTPEEKSAVTALWGKVNVDEVGGEALGRLLVVYPWTQR";
    const std::string mb = "VLSEGEWQLVLHVWAKVEADVAGHGQDILIRLFKSHPETLEKFDRVKHLKTEAEMKASEDLKKHG";
    return {
        {"1LYZ", "HEN EGG WHITE LYSOZYME", {{'A', lyz, 11, 5}}, 12, {}, {}},
        {"1MBN", "MYOGLOBIN", {{'A', mb, 14, 3}}, 8, {{"HEM", 1}}, {}},
        {"1GZX", "HEMOGLOBIN", {{'A', hba, 12, 3}, {'B', hbb, 12, 3}, {'C', hba, 12, 3}, {'D', hbb, 12, 3}}, 6,
         {{"HEM", 4}}, {}},
        {"1VII", "VILLIN HEADPIECE", {{'A', "MLSDEDFKAVFGMTRSAFANLPLWKQQNLKKEKGLF", 10, 4}}, 4, {}, {}},
        {"1A3N", "DEOXY HEMOGLOBIN", {{'A', hba, 12, 3}, {'B', hbb, 12, 3}, {'C', hba, 12, 3}, {'D', hbb, 12, 3}}, 6,
         {{"HEM", 4}}, {7}},
        {"7VDE", "HEMOGLOBIN", {{'A', hba, 12, 3}, {'B', hbb, 12, 3}}, 4, {{"HEM", 2}}, {}},
        {"1ZNI", "INSULIN", {{'A', "GIVEQCCTSICSLYQLENYCN", 9, 3}, {'B', "FVNQHLCGSHLVEALYLVCGERGFFYTPKT", 12, 4}}, 6,
         {{"ZN", 1}}, {}},
        {"4RMB", "SYNTHETIC STAND-IN", {{'A', "MKTAYIAKQRQISFVKSHFSRQLEERLGLIEVQAPILSRVGDGTQDNLSGAEK", 12, 4}}, 5, {}, {}},
        {"1AEE", "SYNTHETIC STAND-IN", {{'A', "SNAMKELIEKAKKELGLSDEEIKRAVEEAKKGNLEAALELLKK", 13, 3}}, 3, {{"SO4", 1}}, {}},
        {"8PFK", "SYNTHETIC STAND-IN", {{'A', "GSHMTEELLKRAEELIKRGDLEGAKRLLEEALRLAEESGDPELIARVLL", 14, 3}}, 0, {}, {}},
        {"8PFQ", "SYNTHETIC STAND-IN",
         {{'A', "GSHMSPEELLKKAIELAKEGNVEEAKKLLEEALKIAKESGNPELLALVLK", 10, 5}, {'B', "GSHMSPEELLKKAIELAKEGN", 10, 5}}, 0,
         {}, {}},
        {"1FNF", "FIBRONECTIN FRAGMENT", {{'A', "VSDVPRDLEVVAATPTSLLISWDAPAVTVRYYRITYGETGGNSPVQEFTVPGSKSTATISGLKPGVDYTITVYAV", 6, 6}},
         6, {}, {}},
        {"1UBQ", "UBIQUITIN", {{'A', "MQIFVKTLTGKTITLEVEPSDTIENVKAKIQDKEGIPPDQQRLIFAGKQLEDGRTLSDYNIQKESTLHLVLRLRGG", 10, 5}},
         10, {}, {}},
        {"6BB5", "OXY HEMOGLOBIN", {{'A', hba, 12, 3}, {'B', hbb, 12, 3}, {'C', hba, 12, 3}, {'D', hbb, 12, 3}}, 6,
         {{"HEM", 4}}, {}},
        {"1TRN", "TRYPSIN", {{'A', "IVGGYNCEENSVPYQVSLNSGYHFCGGSLINEQWVVSAGHCYKSRIQVRLGEHNIEVLEGNEQFINAAKIIRHP", 8, 5}}, 8,
         {{"CA", 1}}, {12, 30}},
        {"1C3W", "BACTERIORHODOPSIN STAND-IN", {{'A', "QAQITGRPEWIWLALGTALMGLGTLYFLVKGMGVSDPDAKKFYAITTLVPAIAFTMYLSMLLGYGLTMVPFGG", 20, 3}},
         2, {}, {}},
        {"1XQ8", "ALPHA-SYNUCLEIN STAND-IN", {{'A', "MDVFMKGLSKAKEGVVAAAEKTKQGVAEAAGKTKEGVLYVGSKTKEGVVHGVATVAEKTKEQ", 30, 2}}, 0, {}, {}},
        {"2YXF", "BETA-2 MICROGLOBULIN STAND-IN", {{'A', "IQRTPKIQVYSRHPAENGKSNFLNCYVSGFHPSDIEVDLLKNGERIEKVEHSDLSFSKDWSFYLLYYTEFTPTEKDEYACRVNHVTLSQPKIVKWDRDM", 7, 6}},
         6, {}, {}},
        {"1ATN", "ACTIN STAND-IN", {{'A', "DEDETTALVCDNGSGLVKAGFAGDDAPRAVFPSIVGRPRHQGVMVGMGQKDSYVGDEAQSKRGILTLKYPIEHGIITNWDDMEK", 12, 4}},
         4, {{"CA", 1}}, {}},
        {"1PQ2", "SYNTHETIC STAND-IN", {{'A', "MSEQLTDQAIAEFKEAFSLFDKDGDGTITTKELGTVMRSLGQNPTEAELQDMINEVDADGNGTIDFPEF", 12, 4}}, 4,
         {{"CA", 2}}, {}},
        {"1L6X", "SYNTHETIC STAND-IN", {{'A', "AKTYHLDEKDSLHEFIRLLTRENEELRRKLAEHGIRVDELDGS", 12, 4}}, 4, {{"CL", 1}}, {}},
    };
}

void write_pdb_fixtures(const fs::path& dir) {
    fs::create_directories(dir);
    unsigned seed = 11;
    for (const auto& f : fixture_table()) {
        const auto s = build_fixture(f, seed++);
        std::string text = "HEADER    " + f.title + "\n";
        text += "REMARK   1 SYNTHETIC TEST FIXTURE: IDEALIZED GEOMETRY BUILT FROM SEQUENCE\n";
        text += chem::write_pdb(s);
        write_file((dir / (f.id + ".pdb")).string(), text);
    }
}

// ---------------------------------------------------------------- UniProt

json comment(const std::string& type, const std::string& text) {
    return {{"commentType", type}, {"texts", json::array({{{"value", text}}})}};
}

json site(const std::string& type, int pos, const std::string& desc, const std::string& ligand = "") {
    json f{{"type", type},
           {"location", {{"start", {{"value", pos}}}, {"end", {{"value", pos}}}}},
           {"description", desc}};
    if (!ligand.empty()) f["ligand"] = {{"name", ligand}};
    return f;
}

void write_uniprot(const fs::path& dir) {
    fs::create_directories(dir);
    const std::string base = "https://rest.uniprot.org/uniprotkb/";
    struct Entry {
        std::string pdb, accession, name, gene, function, subunit, sequence;
        std::vector<json> features;
        std::optional<json> kinetics;
    };
    const std::vector<Entry> entries{
        {"1TRN", "P07477", "Serine protease 1", "PRSS1",
         "Digestive serine endopeptidase; cleaves peptide bonds after arginine or lysine residues.",
         "Monomer in its active form. Forms a complex with serine protease inhibitors.",
         "IVGGYNCEENSVPYQVSLNSGYHFCGGSLINEQWVVSAGHCYKSRIQVRLGEHNIEVLEGNEQFINAAKIIRHP",
         {site("Active site", 63, "Charge relay system"), site("Active site", 107, "Charge relay system"),
          site("Active site", 200, "Charge relay system"), site("Binding site", 75, "", "Ca(2+)"),
          site("Binding site", 77, "", "Ca(2+)"), site("Binding site", 80, "", "Ca(2+)"),
          site("Binding site", 85, "", "Ca(2+)")},
         json{{"commentType", "BIOPHYSICOCHEMICAL PROPERTIES"},
              {"kineticParameters",
               {{"michaelisConstants", json::array({{{"constant", 12.0}, {"unit", "uM"}, {"substrate", "tosyl-arginine ester"}}})}}}}},
        {"1FNF", "P02751", "Fibronectin", "FN1",
         "Binds cell surfaces and compounds such as collagen, fibrin, heparin and actin; involved in cell adhesion "
         "and migration.",
         "Mostly heterodimers or multimers of alternatively spliced variants, connected by 2 disulfide bonds near "
         "the carboxyl ends.",
         "VSDVPRDLEVVAATPTSLLISWDAPAVTVRYYRITYGETGGNSPVQEFTVPGSKSTATISGLKPGVDYTITVYAV",
         {},
         std::nullopt},
        {"1A3N", "P69905", "Hemoglobin subunit alpha", "HBA1",
         "Involved in oxygen transport from the lung to the various peripheral tissues.",
         "Heterotetramer of two alpha chains and two beta chains.", "VLSPADKTNVKAAWGKVGAHAGEYGAEALERMFLSFPTTK",
         {site("Binding site", 58, "distal binding residue", "heme b"),
          site("Binding site", 87, "proximal binding residue", "heme b")},
         std::nullopt},
        {"1GZX", "P69905", "Hemoglobin subunit alpha", "HBA1",
         "Involved in oxygen transport from the lung to the various peripheral tissues.",
         "Heterotetramer of two alpha chains and two beta chains.", "VLSPADKTNVKAAWGKVGAHAGEYGAEALERMFLSFPTTK",
         {site("Binding site", 58, "distal binding residue", "heme b"),
          site("Binding site", 87, "proximal binding residue", "heme b")},
         std::nullopt},
        {"1MBN", "P02185", "Myoglobin", "MB",
         "Monomeric heme protein that stores oxygen in muscle and facilitates its diffusion.", "Monomer.",
         "VLSEGEWQLVLHVWAKVEADVAGHGQDILIRLFKSHPETLEKFDRVKHLKTEAEMKASEDLKKHG",
         {site("Binding site", 65, "distal binding residue", "heme b"),
          site("Binding site", 94, "proximal binding residue", "heme b")},
         std::nullopt},
    };
    std::set<std::string> written;
    for (const auto& e : entries) {
        json search{{"url", base + "search?query=xref:pdb-" + e.pdb + "&format=json&size=1"},
                    {"status", 200},
                    {"body", {{"results", json::array({{{"primaryAccession", e.accession}}})}}}};
        write_file((dir / ("search_" + e.pdb + ".json")).string(), search.dump(2) + "\n");
        if (!written.insert(e.accession).second) continue;
        json body{{"primaryAccession", e.accession},
                  {"proteinDescription", {{"recommendedName", {{"fullName", {{"value", e.name}}}}}}},
                  {"genes", json::array({{{"geneName", {{"value", e.gene}}}}})},
                  {"comments", json::array({comment("FUNCTION", e.function), comment("SUBUNIT", e.subunit)})},
                  {"sequence", {{"value", e.sequence}, {"length", e.sequence.size()}}},
                  {"features", e.features}};
        if (e.kinetics) body["comments"].push_back(*e.kinetics);
        json entry{{"url", base + e.accession + ".json"}, {"status", 200}, {"body", body}};
        write_file((dir / ("entry_" + e.accession + ".json")).string(), entry.dump(2) + "\n");
    }
}

// ---------------------------------------------------------------- corpus PDF

std::string pdf_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '(' || c == ')' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string deflate(const std::string& in) {
    uLongf n = compressBound(static_cast<uLong>(in.size()));
    std::string out(n, '\0');
    if (compress2(reinterpret_cast<Bytef*>(out.data()), &n, reinterpret_cast<const Bytef*>(in.data()),
                  static_cast<uLong>(in.size()), 9) != Z_OK)
        throw Error("zlib compression failed");
    out.resize(n);
    return out;
}

// Minimal single-page PDF with a FlateDecode content stream, one Tj per line.
std::string make_pdf(const std::vector<std::string>& lines) {
    std::string content = "BT\n/F1 10 Tf\n72 740 Td\n12 TL\n";
    for (const auto& l : lines) content += "(" + pdf_escape(l) + ") Tj T*\n";
    content += "ET\n";
    const std::string stream = deflate(content);
    std::vector<std::string> objs{
        "<< /Type /Catalog /Pages 2 0 R >>",
        "<< /Type /Pages /Kids [3 0 R] /Count 1 >>",
        "<< /Type /Page /Parent 2 0 R /MediaBox [0 0 612 792] /Contents 4 0 R /Resources << /Font << /F1 5 0 R >> >> >>",
        "<< /Length " + std::to_string(stream.size()) + " /Filter /FlateDecode >>\nstream\n" + stream + "\nendstream",
        "<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>",
    };
    std::string pdf = "%PDF-1.4\n";
    std::vector<std::size_t> offsets;
    for (size_t i = 0; i < objs.size(); ++i) {
        offsets.push_back(pdf.size());
        pdf += std::to_string(i + 1) + " 0 obj\n" + objs[i] + "\nendobj\n";
    }
    const auto xref = pdf.size();
    pdf += "xref\n0 " + std::to_string(objs.size() + 1) + "\n0000000000 65535 f \n";
    for (auto o : offsets) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", o);
        pdf += buf;
    }
    pdf += "trailer\n<< /Size " + std::to_string(objs.size() + 1) + " /Root 1 0 R >>\nstartxref\n" +
           std::to_string(xref) + "\n%%EOF\n";
    return pdf;
}

void write_corpus_pdf(const fs::path& dir) {
    fs::create_directories(dir);
    write_file((dir / "hemoglobin_md_protocols.pdf").string(),
               make_pdf({
                   "Simulation protocols for tetrameric hemoglobin",
                   "Synthetic review prepared as a test document.",
                   "Hemoglobin tetramers are usually simulated in explicit water with a 2 fs time step,",
                   "hydrogen bond constraints and a Langevin thermostat at 300 K with a friction of 1 per ps.",
                   "Production runs use the NPT ensemble at 1 bar with a Monte Carlo barostat.",
                   "A 10 angstrom nonbonded cutoff with particle mesh Ewald electrostatics is typical.",
                   "Heme groups need dedicated parameters; missing templates are the most common setup error.",
                   "Deoxy and oxy structures should be prepared with identical protocols so that the radius",
                   "of gyration and RMSD traces can be compared directly between the two states.",
               }));
}

// ---------------------------------------------------------------- replay grades

void write_grades(const std::vector<eval::TaskSpec>& tasks, const std::string& model, eval::Framework fw,
                  const std::set<int>& failures, const fs::path& dir) {
    for (const auto& t : tasks) {
        eval::GradeRecord g;
        g.task_id = t.task_id;
        g.model_id = model;
        g.framework = fw;
        g.prompt_style = eval::PromptStyle::natural;
        g.grader = "synthetic";
        g.notes = "synthetic per-task booleans; only the aggregate rate is a published figure";
        const bool ok = !failures.count(t.task_id);
        g.accuracy = ok;
        const auto order = eval::topological_order(t);
        // failed runs stop partway through the pipeline
        const std::size_t stop = ok ? order.size() : (t.task_id * 7 + model.size()) % order.size();
        for (size_t i = 0; i < order.size(); ++i) g.completed[order[i]] = i < stop;
        g.runtime_error = !ok && (t.task_id % 2 == 0);
        g.hallucination = !ok && fw != eval::Framework::mdcrow && (t.task_id % 3 == 0);
        eval::save_grade(g, dir);
    }
}

void write_ladder_grades(const std::vector<eval::TaskSpec>& ladder, const fs::path& dir) {
    struct Profile {
        std::string model;
        eval::PromptStyle style;
        std::vector<int> missed;  // subtasks left undone per ladder task
    };
    const std::vector<Profile> profiles{
        {"gpt-4o", eval::PromptStyle::natural, {0, 0, 0, 0, 0, 0, 0, 0, 8, 0}},
        {"gpt-4o", eval::PromptStyle::ordered, {0, 0, 0, 0, 0, 1, 0, 0, 0, 1}},
        {"llama3-405b", eval::PromptStyle::natural, {0, 0, 0, 1, 0, 0, 1, 0, 1, 1}},
        {"llama3-405b", eval::PromptStyle::ordered, {0, 0, 0, 0, 1, 0, 0, 1, 0, 1}},
        {"claude-3-opus", eval::PromptStyle::natural, {0, 0, 1, 2, 1, 3, 2, 4, 6, 5}},
        {"claude-3-opus", eval::PromptStyle::ordered, {0, 0, 0, 1, 2, 2, 3, 3, 5, 4}},
    };
    for (const auto& p : profiles) {
        for (size_t i = 0; i < ladder.size(); ++i) {
            const auto& t = ladder[i];
            eval::GradeRecord g;
            g.task_id = t.task_id;
            g.model_id = p.model;
            g.framework = eval::Framework::mdcrow;
            g.prompt_style = p.style;
            g.grader = "synthetic";
            g.notes = "synthetic robustness fixture";
            const auto order = eval::topological_order(t);
            const std::size_t done = order.size() - std::min<std::size_t>(order.size(), p.missed[i]);
            for (size_t k = 0; k < order.size(); ++k) g.completed[order[k]] = k < done;
            g.accuracy = done == order.size();
            eval::save_grade(g, dir);
        }
    }
}

// ---------------------------------------------------------------- mock scripts

std::string act(const std::string& thought, const std::string& tool, const std::string& input) {
    return "Thought: " + thought + "\nAction:\n```\n" +
           json{{"action", tool}, {"action_input", input}}.dump(4) + "\n```";
}

std::string final_answer(const std::string& thought, const std::string& text) {
    return "Thought: " + thought + "\nFinal Answer: " + text;
}

void write_json_array(const fs::path& p, const std::vector<std::string>& items) {
    write_file(p.string(), json(items).dump(2) + "\n");
}

void write_mocks(const fs::path& dir) {
    fs::create_directories(dir);
    write_json_array(dir / "trivial.json",
                     {final_answer("The question needs no tools.", "MDCrow is ready."),
                      "Run summary: answered a greeting without using tools."});

    write_json_array(
        dir / "e2e_1lyz.json",
        {act("I need the structure first.", "PDBFileDownloader", "1LYZ"),
         act("Summarize what was downloaded.", "SummarizeProteinStructure", "file_id=str_0001"),
         act("Run a short simulation in vacuum.", "SetUpandRunFunction",
             "structure=str_0001 n_steps=500 ensemble=NVT temperature=300K timestep=1fs record_interval=50 seed=7"),
         act("Plot the backbone RMSD.", "ComputeRMSD", "traj=trj_0002"),
         final_answer("All steps are done.",
                      "Downloaded 1LYZ (str_0001), summarized it, simulated 500 steps (trj_0002) and plotted the "
                      "RMSD over time."),
         "Run summary: downloaded 1LYZ, ran a 500-step NVT simulation and plotted the backbone RMSD."});

    write_json_array(
        dir / "resume_phase1.json",
        {act("Download the first protein.", "PDBFileDownloader", "1VII"),
         act("Simulate it briefly.", "SetUpandRunFunction",
             "structure=str_0001 n_steps=200 ensemble=NVT temperature=300K timestep=1fs record_interval=20 seed=3"),
         final_answer("Done for now.", "Simulated 1VII for 200 steps; the trajectory is trj_0002."),
         "Run summary: downloaded 1VII (str_0001) and simulated it for 200 steps at 300 K; trajectory trj_0002."});

    write_json_array(
        dir / "resume_phase2.json",
        {act("The earlier trajectory is trj_0002; plot its RMSD.", "ComputeRMSD", "traj=trj_0002"),
         final_answer("The plot is registered.", "Plotted the RMSD of the earlier 1VII simulation."),
         "Run summary: resumed the 1VII session and plotted the RMSD of the earlier trajectory."});

    write_json_array(dir / "task2.json",
                     {act("Download the requested structure.", "PDBFileDownloader", "1LYZ"),
                      final_answer("Downloaded.", "1LYZ is registered as str_0001.")});
    write_json_array(dir / "task20.json",
                     {act("Download the requested structure.", "PDBFileDownloader", "1ATN"),
                      final_answer("Downloaded.", "1ATN is registered as str_0001.")});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdcrow-fixturegen: regenerate synthetic fixtures"};
    std::string out = MDCROW_DATA_DIR;
    app.add_option("--data-dir", out, "data directory (must already hold tasks25.json and ladder10.json)")
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    try {
        const fs::path root = out;
        write_pdb_fixtures(root / "fixtures" / "pdb");
        write_uniprot(root / "fixtures" / "uniprot");
        write_corpus_pdf(root / "corpus");
        write_mocks(root / "mock");

        const auto tasks = eval::load_tasks((root / "tasks25.json").string());
        const fs::path replay = root / "grades" / "reference";
        fs::remove_all(replay);
        fs::create_directories(replay);
        write_grades(tasks, "gpt-4o", eval::Framework::mdcrow, {7, 8, 12, 13, 15, 19, 25}, replay);
        write_grades(tasks, "llama3-405b", eval::Framework::mdcrow, {1, 7, 8, 12, 14, 15, 23, 25}, replay);
        write_grades(tasks, "gpt-4o", eval::Framework::react_interpreter,
                     {1, 3, 5, 6, 7, 8, 11, 12, 13, 14, 15, 16, 18, 19, 22, 23, 24, 25}, replay);

        const auto ladder = eval::load_tasks((root / "ladder10.json").string());
        const fs::path lg = root / "grades" / "ladder_synthetic";
        fs::remove_all(lg);
        fs::create_directories(lg);
        write_ladder_grades(ladder, lg);
        std::cout << "fixtures written under " << root.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
