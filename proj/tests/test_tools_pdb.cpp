#include "support.hpp"

#include "mdcrow/chem/builder.hpp"
#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/pdb/clean.hpp"
#include "mdcrow/pdb/fetch.hpp"
#include "mdcrow/pdb/summary.hpp"
#include "mdcrow/sim/script.hpp"

#include <doctest.h>

#include <set>
#include <sstream>
#include <tuple>

using namespace mdcrow;
namespace fs = std::filesystem;

namespace {

pdb::FetchConfig fixtures() {
    pdb::FetchConfig c;
    c.fixture_dir = testing::data() / "fixtures/pdb";
    c.http = std::make_shared<NoNetworkClient>();
    return c;
}

// Second, column-slicing reader used as the counting oracle.
struct RawCounts {
    std::size_t atoms = 0, hydrogens = 0, waters = 0;
    std::set<char> chains;
    std::set<std::tuple<char, int, char>> residues;
};

RawCounts raw_count(const std::string& text) {
    RawCounts c;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("ENDMDL", 0) == 0) break;
        if (line.rfind("ATOM  ", 0) != 0 && line.rfind("HETATM", 0) != 0) continue;
        line.resize(80, ' ');
        ++c.atoms;
        const char chain = line[21];
        const int seq = std::stoi(line.substr(22, 4));
        const char icode = line[26];
        const std::string resname = trim(line.substr(17, 3));
        std::string el = trim(line.substr(76, 2));
        if (el == "H" || el == "D") ++c.hydrogens;
        c.chains.insert(chain);
        if (c.residues.insert({chain, seq, icode}).second && resname == "HOH") ++c.waters;
    }
    return c;
}

std::size_t heavy(const chem::Structure& s) {
    std::size_t n = 0;
    for (const auto& a : s.atoms) n += a.element != "H";
    return n;
}

std::size_t hydrogens_near(const chem::Structure& s, int res_seq, const std::string& atom, double cutoff) {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    for (const auto& a : s.atoms)
        if (a.res_seq == res_seq && a.name == atom) p = a.pos;
    std::size_t n = 0;
    for (const auto& a : s.atoms)
        if (a.element == "H" && a.res_seq == res_seq && (a.pos - p).norm() < cutoff) ++n;
    return n;
}

}  // namespace

TEST_CASE("fetch from fixtures") {
    const auto s = pdb::fetch_structure("1LYZ", fixtures());
    CHECK(chem::chain_ids(s).size() >= 1);
    CHECK(s.size() > 0);
    CHECK(pdb::fetch_structure("1lyz", fixtures()).size() == s.size());
    CHECK_THROWS_AS(pdb::fetch_structure("XX", fixtures()), UsageError);
    CHECK_THROWS_AS(pdb::fetch_structure("ABCD", fixtures()), UsageError);
    CHECK_THROWS_AS(pdb::fetch_structure("9ZZZ", fixtures()), NotFoundError);
    CHECK(static_cast<NoNetworkClient&>(*fixtures().http).attempts() == 0);

    auto live = fixtures();
    live.live = true;
    CHECK_THROWS_AS(pdb::fetch_structure("1LYZ", live), NetworkError);
}

TEST_CASE("summaries agree with a column-slicing recount on every fixture") {
    for (const auto& entry : fs::directory_iterator(testing::data() / "fixtures/pdb")) {
        const auto text = testing::slurp(entry.path());
        const auto oracle = raw_count(text);
        const auto sum = pdb::summarize_structure(chem::parse_pdb(text));
        INFO(entry.path().filename().string());
        CHECK(sum.atoms == oracle.atoms);
        CHECK(sum.hydrogens == oracle.hydrogens);
        CHECK(sum.heavy_atoms == oracle.atoms - oracle.hydrogens);
        CHECK(sum.chains == oracle.chains.size());
        CHECK(sum.residues == oracle.residues.size());
        CHECK(sum.waters == oracle.waters);
    }
}

TEST_CASE("1AEE chain and atom counts through the tool") {
    testing::TempDir dir("sum");
    registry::FileRegistry files(dir.path());
    sim::ToyEngine engine;
    auto ctx = tools::fixture_context(files, engine, nullptr);
    auto set = tools::build_toolset(ctx);
    auto fetched = agent::dispatch_tool(agent::AgentAction::call("", "PDBFileDownloader", "1AEE"), set);
    REQUIRE_FALSE(fetched.error);
    auto sum = agent::dispatch_tool(agent::AgentAction::call("", "SummarizeProteinStructure", "file_id=str_0001"), set);
    REQUIRE_FALSE(sum.error);
    const auto oracle = raw_count(testing::slurp(testing::data() / "fixtures/pdb/1AEE.pdb"));
    const auto head = "atoms: " + std::to_string(oracle.atoms) + ", residues: " +
                      std::to_string(oracle.residues.size()) + ", chains: " + std::to_string(oracle.chains.size());
    CHECK(sum.observation.rfind(head, 0) == 0);
}

TEST_CASE("summary edge cases") {
    CHECK(pdb::summarize_structure(chem::Structure{}) == pdb::StructureSummary{});

    chem::Structure box;
    for (int i = 0; i < 5; ++i) {
        for (const auto& [name, el, dx] : {std::tuple{"O", "O", 0.0}, {"H1", "H", 0.96}, {"H2", "H", -0.3}}) {
            chem::Atom a;
            a.name = name;
            a.element = el;
            a.res_name = "HOH";
            a.res_seq = i + 1;
            a.hetero = true;
            a.pos = Eigen::Vector3d(3.0 * i + dx, 0, 0);
            box.atoms.push_back(a);
        }
    }
    const auto s = pdb::summarize_structure(box);
    CHECK(s.residues == 5);
    CHECK(s.waters == 5);
    CHECK(s.protein_residues == 0);
    CHECK(pdb::format_summary(s).rfind("atoms: 15, residues: 5, chains: 1", 0) == 0);
}

TEST_CASE("parse/serialize round-trip to the format's precision") {
    const auto s = pdb::fetch_structure("1TRN", fixtures());
    const auto back = chem::parse_pdb(chem::write_pdb(s));
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(back.atoms[i].name == s.atoms[i].name);
        CHECK((back.atoms[i].pos - s.atoms[i].pos).cwiseAbs().maxCoeff() <= 5e-4 + 1e-12);
    }
}

TEST_CASE("clean: all flags off is the identity on atom count") {
    const auto s = pdb::fetch_structure("1LYZ", fixtures());
    pdb::CleanSpec spec;
    spec.add_hydrogens = false;
    spec.add_missing_heavy_atoms = false;
    spec.remove_heterogens = false;
    auto r = pdb::clean_structure(s, spec);
    CHECK(r.structure.size() == s.size());
    CHECK(r.structure.source == chem::StructureSource::cleaned);
}

TEST_CASE("clean: Asp protonation follows pKa 3.9") {
    auto pep = chem::build_peptide("GADAG", {});
    pdb::CleanSpec spec;
    auto at5 = pdb::clean_structure(pep, spec).structure;
    spec.target_ph = 2.0;
    auto at2 = pdb::clean_structure(pep, spec).structure;
    CHECK(hydrogens_near(at5, 3, "OD2", 1.1) == 0);
    CHECK(hydrogens_near(at2, 3, "OD2", 1.1) == 1);
    CHECK(at2.size() == at5.size() + 1);
    spec.target_ph = 3.95;
    CHECK(hydrogens_near(pdb::clean_structure(pep, spec).structure, 3, "OD2", 1.1) == 0);
    spec.target_ph = 3.85;
    CHECK(hydrogens_near(pdb::clean_structure(pep, spec).structure, 3, "OD2", 1.1) == 1);

    spec.target_ph = 0.0;
    CHECK_THROWS_AS(pdb::clean_structure(pep, spec), UsageError);
}

TEST_CASE("clean: a deleted backbone O comes back as exactly one heavy atom") {
    auto s = pdb::fetch_structure("1LYZ", fixtures());
    s = pdb::remove_heterogens(s, false);
    const auto before = heavy(s);
    auto it = std::find_if(s.atoms.begin(), s.atoms.end(), [](const chem::Atom& a) {
        return a.res_seq == 10 && a.name == "O";
    });
    REQUIRE(it != s.atoms.end());
    s.atoms.erase(it);
    pdb::CleanSpec spec;
    spec.add_hydrogens = false;
    spec.remove_heterogens = false;
    auto r = pdb::clean_structure(s, spec);
    CHECK(heavy(r.structure) == heavy(s) + 1);
    CHECK(heavy(r.structure) == before);
    CHECK(r.added_heavy_atoms == 1);
}

TEST_CASE("clean: truncated side chains are completed from templates") {
    const auto s = pdb::fetch_structure("1TRN", fixtures());
    pdb::CleanSpec spec;
    spec.add_hydrogens = false;
    auto r = pdb::clean_structure(s, spec);
    CHECK(r.added_heavy_atoms > 0);
}

TEST_CASE("clean: idempotent and never moves heavy atoms") {
    for (const char* id : {"1LYZ", "1TRN", "1A3N"}) {
        INFO(id);
        const auto s = pdb::fetch_structure(id, fixtures());
        pdb::CleanSpec spec;
        spec.target_ph = 7.0;
        const auto once = pdb::clean_structure(s, spec).structure;
        const auto twice = pdb::clean_structure(once, spec).structure;
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once.atoms[i].name == twice.atoms[i].name);
            CHECK(once.atoms[i].res_seq == twice.atoms[i].res_seq);
            CHECK((once.atoms[i].pos - twice.atoms[i].pos).norm() < 1e-9);
        }

        // Hydrogen addition alone leaves every heavy atom exactly in place.
        const auto base = pdb::remove_heterogens(s, false);
        const auto with_h = pdb::add_hydrogens(base, 7.0);
        std::vector<Eigen::Vector3d> a, b;
        for (const auto& at : base.atoms)
            if (at.element != "H") a.push_back(at.pos);
        for (const auto& at : with_h.atoms)
            if (at.element != "H") b.push_back(at.pos);
        REQUIRE(a.size() == b.size());
        double worst = 0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).norm());
        CHECK(worst == 0.0);
    }
}

TEST_CASE("clean: heterogen removal respects keep_water") {
    const auto s = pdb::fetch_structure("1A3N", fixtures());
    const auto before = pdb::summarize_structure(s);
    REQUIRE(before.waters > 0);
    REQUIRE(before.heterogen_residues > 0);
    const auto dry = pdb::summarize_structure(pdb::remove_heterogens(s, false));
    CHECK(dry.waters == 0);
    CHECK(dry.heterogen_residues == 0);
    CHECK(dry.protein_residues == before.protein_residues);
    const auto wet = pdb::summarize_structure(pdb::remove_heterogens(s, true));
    CHECK(wet.waters == before.waters);
    CHECK(wet.heterogen_residues == 0);
}

TEST_CASE("render: single atom is a centred disc") {
    chem::Structure one;
    chem::Atom a;
    a.name = "C";
    a.element = "C";
    one.atoms.push_back(a);
    const auto img = pdb::render_structure(one, 101, 101);
    const auto bg = img.at(0, 0);
    CHECK(img.at(50, 50) != bg);
    int lo_x = 1000, hi_x = -1, lo_y = 1000, hi_y = -1;
    for (int y = 0; y < 101; ++y)
        for (int x = 0; x < 101; ++x)
            if (img.at(x, y) != bg) {
                lo_x = std::min(lo_x, x);
                hi_x = std::max(hi_x, x);
                lo_y = std::min(lo_y, y);
                hi_y = std::max(hi_y, y);
            }
    CHECK(std::abs((lo_x + hi_x) - 100) <= 1);
    CHECK(std::abs((lo_y + hi_y) - 100) <= 1);
}

TEST_CASE("render: deterministic and registered by the tool") {
    const auto s = pdb::fetch_structure("1XQ8", fixtures());
    CHECK(pdb::render_structure(s).to_ppm() == pdb::render_structure(s).to_ppm());

    testing::TempDir dir("viz");
    registry::FileRegistry files(dir.path());
    sim::ToyEngine engine;
    auto ctx = tools::fixture_context(files, engine, nullptr);
    auto set = tools::build_toolset(ctx);
    REQUIRE_FALSE(agent::dispatch_tool(agent::AgentAction::call("", "PDBFileDownloader", "1XQ8"), set).error);
    auto viz = agent::dispatch_tool(agent::AgentAction::call("", "VisualizeProtein", "file_id=str_0001"), set);
    REQUIRE_FALSE(viz.error);
    const auto fig = files.entries().back();
    CHECK(fig.kind == registry::FileKind::figure);
    CHECK(fs::file_size(fig.path) > 0);
    CHECK(viz.observation.find(fig.file_id) != std::string::npos);
}
