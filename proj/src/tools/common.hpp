#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/common/kv.hpp"
#include "mdcrow/registry/registry.hpp"
#include "mdcrow/sim/trajectory.hpp"
#include "mdcrow/tools/toolset.hpp"

#include <string>

namespace mdcrow::tools::detail {

registry::FileRegistry& files(ToolContext& ctx);

// Structure from a structure file id, or the first frame of a trajectory.
chem::Structure load_structure(ToolContext& ctx, const std::string& file_id);

// Trajectory file id, or a structure file id as a one-frame trajectory.
sim::Trajectory load_frames(ToolContext& ctx, const std::string& file_id);

registry::FileEntry save_structure(ToolContext& ctx, const chem::Structure& s, const std::string& stem,
                                   const std::string& description);

registry::FileEntry save_text(ToolContext& ctx, const std::string& text, const std::string& stem,
                              const std::string& ext, const std::string& description, registry::FileKind kind);

} // namespace mdcrow::tools::detail
