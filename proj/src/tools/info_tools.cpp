#include "common.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

namespace mdcrow::tools {

using agent::ToolCategory;

void add_info_tools(agent::Toolset& set, ToolContext& ctx) {
    set.add({"UniProtLookup", ToolCategory::information_retrieval,
             "Look up protein metadata in the UniProt knowledge base: names, function, subunit structure, "
             "sequence, active and binding sites, kinetics. Accepts a UniProt accession or a PDB id.",
             "query=<accession or PDB id> [fields=all|function,subunit,sequence,sites,active,binding,kinetics,names]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto q = args.primary("query");
                 if (!q) throw UsageError("give an accession or PDB id, e.g. query=1TRN");
                 std::vector<std::string> fields{"all"};
                 if (auto f = args.get("fields")) fields = split(*f, ',');
                 for (auto& f : fields) f = to_lower(trim(f));
                 return info::format_metadata(info::fetch_protein_metadata(*q, ctx.uniprot), fields);
             }});

    set.add({"LiteratureSearch", ToolCategory::information_retrieval,
             "Answer a question from the local library of papers, citing sources as [doc#chunk].",
             "question=\"<question text>\" (or the question as plain text)",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 std::string q = args.get("question").value_or("");
                 if (q.empty()) q = trim(in);
                 const auto& corpus = ctx.corpus();
                 const auto answer = info::literature_search(q, corpus, ctx.model);
                 return info::format_literature_answer(answer, corpus);
             }});
}

} // namespace mdcrow::tools
