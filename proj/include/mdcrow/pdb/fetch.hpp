#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/common/http.hpp"

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace mdcrow::pdb {

namespace fs = std::filesystem;

// [0-9][A-Za-z0-9]{3}
bool valid_pdb_id(std::string_view id);

/// Where structures come from. Fixture mode reads <fixture_dir>/<ID>.pdb and
/// never touches the network.
struct FetchConfig {
    bool live = false;
    fs::path fixture_dir;
    std::shared_ptr<HttpClient> http;
    std::string base_url = "https://files.rcsb.org/download/";
};

// Raw PDB text. Malformed id: UsageError. Unknown id: NotFoundError.
// Transport failure in live mode: NetworkError.
std::string fetch_pdb_text(std::string_view pdb_id, const FetchConfig& config);

chem::Structure fetch_structure(std::string_view pdb_id, const FetchConfig& config);

} // namespace mdcrow::pdb
