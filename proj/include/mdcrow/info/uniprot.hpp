#pragma once

#include "mdcrow/common/http.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::info {

struct Site {
    enum class Kind { active, binding };
    Kind kind = Kind::binding;
    int begin = 0;  // 1-based, inclusive
    int end = 0;
    std::string note;
    friend bool operator==(const Site&, const Site&) = default;
};

struct ProteinMetadata {
    std::string accession;
    std::vector<std::string> names;  // protein name first, then genes
    std::string function_text;
    std::string subunit_structure;
    std::string sequence;
    std::vector<Site> sites;
    std::optional<std::string> kinetics;
    friend bool operator==(const ProteinMetadata&, const ProteinMetadata&) = default;
};

/// Live mode uses a real HTTP client; fixture mode a RecordedHttpClient.
/// Either way every request goes through `http`.
struct UniprotConfig {
    std::shared_ptr<HttpClient> http;
    std::string base_url = "https://rest.uniprot.org/uniprotkb/";
};

bool looks_like_accession(std::string_view q);

// Parses one UniProtKB JSON entry.
ProteinMetadata parse_uniprot_entry(std::string_view json_text);

// Accepts an accession or a 4-character PDB id (resolved through a
// cross-reference search). Unknown: NotFoundError. Transport: NetworkError.
ProteinMetadata fetch_protein_metadata(std::string_view query, const UniprotConfig& config);

std::string entry_url(const UniprotConfig& config, std::string_view accession);
std::string pdb_search_url(const UniprotConfig& config, std::string_view pdb_id);

// Report sections selected by `fields` ("all", "function", "subunit",
// "sequence", "sites", "active", "binding", "kinetics", "names").
std::string format_metadata(const ProteinMetadata& m, const std::vector<std::string>& fields = {"all"});

} // namespace mdcrow::info
