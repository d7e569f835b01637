#pragma once

#include "mdcrow/agent/tool.hpp"
#include "mdcrow/info/literature.hpp"
#include "mdcrow/info/uniprot.hpp"
#include "mdcrow/llm/gateway.hpp"
#include "mdcrow/pdb/fetch.hpp"
#include "mdcrow/registry/registry.hpp"
#include "mdcrow/sim/script.hpp"

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>

namespace mdcrow::tools {

namespace fs = std::filesystem;

/// Everything the tools touch. The registry and engine outlive the toolset.
struct ToolContext {
    registry::FileRegistry* files = nullptr;
    sim::EngineAdapter* engine = nullptr;
    llm::ChatModel* model = nullptr;  // literature synthesis and script edits; may be null
    pdb::FetchConfig pdb;
    info::UniprotConfig uniprot;
    fs::path corpus_dir;

    // Lazily loaded corpus.
    const info::Corpus& corpus();

private:
    std::shared_ptr<info::Corpus> corpus_;
    std::shared_ptr<std::mutex> corpus_mu_ = std::make_shared<std::mutex>();
};

void add_info_tools(agent::Toolset& set, ToolContext& ctx);
void add_pdb_tools(agent::Toolset& set, ToolContext& ctx);
void add_sim_tools(agent::Toolset& set, ToolContext& ctx);
void add_analysis_tools(agent::Toolset& set, ToolContext& ctx);
void add_meta_tools(agent::Toolset& set, ToolContext& ctx);

// All categories. `ctx` must outlive the toolset.
agent::Toolset build_toolset(ToolContext& ctx);

// Data directory shipped with the project (fixtures, corpus, tasks).
fs::path data_dir();

// Fixture-mode context rooted at data_dir(); no network access.
ToolContext fixture_context(registry::FileRegistry& files, sim::EngineAdapter& engine, llm::ChatModel* model);

// Live context: RCSB and UniProt over the network, local corpus directory.
ToolContext live_context(registry::FileRegistry& files, sim::EngineAdapter& engine, llm::ChatModel* model,
                         const fs::path& corpus_dir);

} // namespace mdcrow::tools
