#include "mdcrow/info/uniprot.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/pdb/fetch.hpp"

#include <json.hpp>

#include <algorithm>
#include <regex>

namespace mdcrow::info {

using nlohmann::json;

bool looks_like_accession(std::string_view q) {
    static const std::regex re("[OPQ][0-9][A-Z0-9]{3}[0-9]|[A-NR-Z][0-9]([A-Z][A-Z0-9]{2}[0-9]){1,2}");
    return std::regex_match(q.begin(), q.end(), re);
}

namespace {

std::string comment_text(const json& entry, const std::string& type) {
    std::vector<std::string> parts;
    for (const auto& c : entry.value("comments", json::array())) {
        if (c.value("commentType", "") != type) continue;
        for (const auto& t : c.value("texts", json::array())) parts.push_back(t.value("value", ""));
    }
    return join(parts, " ");
}

std::optional<std::string> kinetics_text(const json& entry) {
    std::vector<std::string> parts;
    for (const auto& c : entry.value("comments", json::array())) {
        if (c.value("commentType", "") != "BIOPHYSICOCHEMICAL PROPERTIES") continue;
        if (!c.contains("kineticParameters")) continue;
        const auto& k = c["kineticParameters"];
        for (const auto& m : k.value("michaelisConstants", json::array()))
            parts.push_back("KM=" + format_number(m.value("constant", 0.0)) + " " + m.value("unit", "") + " for " +
                            m.value("substrate", ""));
        for (const auto& n : k.value("note", json::object()).value("texts", json::array()))
            parts.push_back(n.value("value", ""));
    }
    if (parts.empty()) return std::nullopt;
    return join(parts, "; ");
}

} // namespace

ProteinMetadata parse_uniprot_entry(std::string_view json_text) {
    json e;
    try {
        e = json::parse(json_text);
    } catch (const json::exception& ex) {
        throw ParseError(std::string("malformed protein database response: ") + ex.what());
    }
    ProteinMetadata m;
    m.accession = e.value("primaryAccession", "");
    if (m.accession.empty()) throw ParseError("protein database response has no accession");
    if (e.contains("proteinDescription")) {
        const auto& d = e["proteinDescription"];
        if (d.contains("recommendedName")) m.names.push_back(d["recommendedName"]["fullName"].value("value", ""));
        for (const auto& alt : d.value("alternativeNames", json::array()))
            m.names.push_back(alt["fullName"].value("value", ""));
    }
    for (const auto& g : e.value("genes", json::array()))
        if (g.contains("geneName")) m.names.push_back(g["geneName"].value("value", ""));
    m.function_text = comment_text(e, "FUNCTION");
    m.subunit_structure = comment_text(e, "SUBUNIT");
    if (e.contains("sequence")) m.sequence = e["sequence"].value("value", "");
    for (char c : m.sequence)
        if (std::string_view("ACDEFGHIKLMNPQRSTVWYX").find(c) == std::string_view::npos)
            throw ParseError("sequence of " + m.accession + " contains invalid residue letter '" + std::string(1, c) +
                             "'");
    for (const auto& f : e.value("features", json::array())) {
        const std::string type = f.value("type", "");
        if (type != "Active site" && type != "Binding site") continue;
        Site s;
        s.kind = type == "Active site" ? Site::Kind::active : Site::Kind::binding;
        s.begin = f["location"]["start"].value("value", 0);
        s.end = f["location"]["end"].value("value", 0);
        s.note = f.value("description", "");
        if (f.contains("ligand")) {
            const auto lig = f["ligand"].value("name", "");
            if (!lig.empty()) s.note = s.note.empty() ? lig : s.note + "; " + lig;
        }
        m.sites.push_back(s);
    }
    m.kinetics = kinetics_text(e);
    return m;
}

std::string entry_url(const UniprotConfig& config, std::string_view accession) {
    return config.base_url + std::string(accession) + ".json";
}

std::string pdb_search_url(const UniprotConfig& config, std::string_view pdb_id) {
    return config.base_url + "search?query=xref:pdb-" + to_upper(pdb_id) + "&format=json&size=1";
}

namespace {

std::string get_or_throw(HttpClient& http, const std::string& url, const std::string& what) {
    const auto r = http.get(url, {{"Accept", "application/json"}});
    if (r.status == 404 || r.status == 400) throw NotFoundError(what + " not found in the protein database");
    if (r.status == 0 || r.status >= 500)
        throw NetworkError("protein database request failed (" +
                           (r.status == 0 ? r.error : "HTTP " + std::to_string(r.status)) + "); try again");
    if (r.status != 200) throw Error("protein database returned HTTP " + std::to_string(r.status));
    return r.body;
}

} // namespace

ProteinMetadata fetch_protein_metadata(std::string_view query, const UniprotConfig& config) {
    const std::string q = to_upper(trim(query));
    if (q.empty()) throw UsageError("protein lookup needs an accession (e.g. P00760) or a PDB id (e.g. 1TRN)");
    if (!config.http) throw UsageError("protein lookup has no HTTP client configured");
    std::string accession = q;
    if (!looks_like_accession(q)) {
        if (!pdb::valid_pdb_id(q))
            throw UsageError("'" + std::string(query) + "' is neither a protein accession nor a PDB id");
        const auto body = get_or_throw(*config.http, pdb_search_url(config, q), "PDB entry " + q);
        json res;
        try {
            res = json::parse(body);
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed search response: ") + e.what());
        }
        const auto results = res.value("results", json::array());
        if (results.empty()) throw NotFoundError("no protein database entry cross-references PDB " + q);
        accession = results.front().value("primaryAccession", "");
        if (accession.empty()) throw ParseError("search result without accession for PDB " + q);
    }
    return parse_uniprot_entry(get_or_throw(*config.http, entry_url(config, accession), "accession " + accession));
}

std::string format_metadata(const ProteinMetadata& m, const std::vector<std::string>& fields) {
    auto want = [&](std::string_view f) {
        return std::find(fields.begin(), fields.end(), "all") != fields.end() ||
               std::find(fields.begin(), fields.end(), f) != fields.end();
    };
    std::string t = "accession: " + m.accession + "\n";
    if (want("names") && !m.names.empty()) t += "names: " + join(m.names, "; ") + "\n";
    if (want("function")) t += "function: " + (m.function_text.empty() ? "not annotated" : m.function_text) + "\n";
    if (want("subunit"))
        t += "subunit structure: " + (m.subunit_structure.empty() ? "not annotated" : m.subunit_structure) + "\n";
    if (want("sequence"))
        t += "sequence (" + std::to_string(m.sequence.size()) + " residues): " + m.sequence + "\n";
    for (auto kind : {Site::Kind::active, Site::Kind::binding}) {
        const bool active = kind == Site::Kind::active;
        if (!want("sites") && !want(active ? "active" : "binding")) continue;
        std::vector<std::string> lines;
        for (const auto& s : m.sites) {
            if (s.kind != kind) continue;
            std::string range = s.begin == s.end ? std::to_string(s.begin)
                                                 : std::to_string(s.begin) + "-" + std::to_string(s.end);
            lines.push_back("  residue " + range + (s.note.empty() ? "" : ": " + s.note));
        }
        t += std::string(active ? "active sites" : "binding sites") + ": " +
             (lines.empty() ? "none annotated\n" : "\n" + join(lines, "\n") + "\n");
    }
    if (want("kinetics")) t += "kinetics: " + m.kinetics.value_or("not annotated") + "\n";
    return t;
}

} // namespace mdcrow::info
