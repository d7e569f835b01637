#include "mdcrow/pdb/fetch.hpp"

#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace mdcrow::pdb {

bool valid_pdb_id(std::string_view id) {
    static const std::regex re("[0-9][A-Za-z0-9]{3}");
    return std::regex_match(id.begin(), id.end(), re);
}

namespace {

std::string fixture_listing(const fs::path& dir) {
    std::vector<std::string> ids;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(dir, ec))
        if (e.path().extension() == ".pdb") ids.push_back(e.path().stem().string());
    std::sort(ids.begin(), ids.end());
    return ids.empty() ? "none" : join(ids, ", ");
}

} // namespace

std::string fetch_pdb_text(std::string_view pdb_id, const FetchConfig& config) {
    const std::string id = to_upper(trim(pdb_id));
    if (!valid_pdb_id(id))
        throw UsageError("invalid PDB id '" + std::string(pdb_id) +
                         "': expected 4 characters, a digit followed by 3 letters or digits (e.g. 1LYZ)");
    if (!config.live) {
        const fs::path p = config.fixture_dir / (id + ".pdb");
        if (!fs::exists(p))
            throw NotFoundError("PDB entry " + id + " is not in the local structure store (available: " +
                                fixture_listing(config.fixture_dir) + ")");
        return read_file(p.string());
    }
    if (!config.http) throw UsageError("live structure download needs an HTTP client");
    const auto r = config.http->get(config.base_url + id + ".pdb", {});
    if (r.status == 404) throw NotFoundError("PDB entry " + id + " does not exist in the structure archive");
    if (r.status == 0 || r.status >= 500)
        throw NetworkError("structure download for " + id + " failed (" +
                           (r.status == 0 ? r.error : "HTTP " + std::to_string(r.status)) + "); try again");
    if (r.status != 200) throw Error("structure download for " + id + " failed with HTTP " + std::to_string(r.status));
    return r.body;
}

chem::Structure fetch_structure(std::string_view pdb_id, const FetchConfig& config) {
    auto s = chem::parse_pdb(fetch_pdb_text(pdb_id, config));
    if (s.empty()) throw ParseError("PDB entry " + to_upper(trim(pdb_id)) + " contains no atoms");
    s.source = chem::StructureSource::fetched;
    s.provenance = "fetched " + to_upper(trim(pdb_id)) + (config.live ? " (archive)" : " (local store)");
    return s;
}

} // namespace mdcrow::pdb
