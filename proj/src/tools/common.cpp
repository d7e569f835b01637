#include "common.hpp"

#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/llm/gateway.hpp"

#include <cstdlib>

namespace mdcrow::tools {

const info::Corpus& ToolContext::corpus() {
    std::lock_guard lock(*corpus_mu_);
    if (!corpus_) {
        if (corpus_dir.empty() || !fs::is_directory(corpus_dir))
            corpus_ = std::make_shared<info::Corpus>();
        else
            corpus_ = std::make_shared<info::Corpus>(info::load_corpus(corpus_dir));
    }
    return *corpus_;
}

fs::path data_dir() {
    if (const char* env = std::getenv("MDCROW_DATA_DIR"); env && *env) return env;
    return MDCROW_DATA_DIR;
}

ToolContext fixture_context(registry::FileRegistry& files, sim::EngineAdapter& engine, llm::ChatModel* model) {
    ToolContext ctx;
    ctx.files = &files;
    ctx.engine = &engine;
    ctx.model = model;
    ctx.pdb.live = false;
    ctx.pdb.fixture_dir = data_dir() / "fixtures" / "pdb";
    ctx.uniprot.http = std::make_shared<RecordedHttpClient>((data_dir() / "fixtures" / "uniprot").string());
    ctx.corpus_dir = data_dir() / "corpus";
    return ctx;
}

ToolContext live_context(registry::FileRegistry& files, sim::EngineAdapter& engine, llm::ChatModel* model,
                         const fs::path& corpus_dir) {
    ToolContext ctx;
    ctx.files = &files;
    ctx.engine = &engine;
    ctx.model = model;
    auto http = make_http_client();
    ctx.pdb.live = true;
    ctx.pdb.http = http;
    ctx.uniprot.http = http;
    ctx.corpus_dir = corpus_dir;
    return ctx;
}

agent::Toolset build_toolset(ToolContext& ctx) {
    if (!ctx.files) throw UsageError("tool context has no file registry");
    agent::Toolset set;
    add_info_tools(set, ctx);
    add_pdb_tools(set, ctx);
    add_sim_tools(set, ctx);
    add_analysis_tools(set, ctx);
    add_meta_tools(set, ctx);
    return set;
}

namespace detail {

registry::FileRegistry& files(ToolContext& ctx) {
    if (!ctx.files) throw UsageError("tool context has no file registry");
    return *ctx.files;
}

chem::Structure load_structure(ToolContext& ctx, const std::string& file_id) {
    const auto entry = files(ctx).get(trim(file_id));
    const auto path = files(ctx).resolve(entry.file_id);
    if (entry.kind == registry::FileKind::structure) return chem::read_pdb(path.string());
    if (entry.kind == registry::FileKind::trajectory) {
        auto t = sim::read_trajectory(path.string());
        auto s = t.topology;
        if (t.n_frames() > 0) s.set_coordinates(t.frames.front());
        return s;
    }
    throw UsageError(entry.file_id + " is a " + registry::to_string(entry.kind) +
                     " file; a structure (str_...) or trajectory (trj_...) id is needed");
}

sim::Trajectory load_frames(ToolContext& ctx, const std::string& file_id) {
    const auto entry = files(ctx).get(trim(file_id));
    const auto path = files(ctx).resolve(entry.file_id);
    if (entry.kind == registry::FileKind::trajectory) return sim::read_trajectory(path.string());
    if (entry.kind == registry::FileKind::structure) {
        sim::Trajectory t;
        t.topology = chem::read_pdb(path.string());
        t.frames.push_back(t.topology.coordinates());
        t.times.push_back(0.0);
        if (t.topology.box) {
            t.periodic = true;
            t.boxes.push_back(*t.topology.box);
        }
        return t;
    }
    throw UsageError(entry.file_id + " is a " + registry::to_string(entry.kind) +
                     " file; a trajectory (trj_...) or structure (str_...) id is needed");
}

registry::FileEntry save_structure(ToolContext& ctx, const chem::Structure& s, const std::string& stem,
                                   const std::string& description) {
    const auto path = files(ctx).new_path(stem, ".pdb");
    chem::save_pdb(s, path.string());
    return files(ctx).register_file(path, description, registry::FileKind::structure);
}

registry::FileEntry save_text(ToolContext& ctx, const std::string& text, const std::string& stem,
                              const std::string& ext, const std::string& description, registry::FileKind kind) {
    const auto path = files(ctx).new_path(stem, ext);
    write_file(path.string(), text);
    return files(ctx).register_file(path, description, kind);
}

} // namespace detail

} // namespace mdcrow::tools
