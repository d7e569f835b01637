#include "mdcrow/agent/prompt.hpp"

#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"

namespace mdcrow::agent {

const std::string& mdcrow_prompt_template() {
    static const std::string t = R"(You are an expert molecular dynamics scientist, and your task is to respond to the question or solve the problem to the best of your ability using the provided tools.

You can only respond with a single complete 'Thought, Action, Action Input' format OR a single 'Final Answer' format.

Complete format:
Thought: (reflect on your progress and decide what to do next)
Action:
```
{
    "action": (the action name, it should be the name of a tool),
    "action_input": (the input string for the action)
}
```

OR

Final Answer: (the final response to the original input
question, once all steps are complete)

You are required to use the tools provided, using the most specific tool available for each action. Your final answer should contain all information necessary to answer the question and its subquestions. Before you finish, reflect on your progress and make sure you have addressed the question in its entirety.

If you are asked to continue or reference previous runs, the context will be provided to you. If context is provided, you should assume you are continuing a chat.

Here is the input:
Previous Context: {context}
Question: {input} )";
    return t;
}

const std::string& direct_llm_prompt() {
    static const std::string t =
        "You are an expert molecular dynamics scientist, and your task is to respond to the question or solve the "
        "problem in its entirety to the best of your ability. If any part of the task requires you to perform  an "
        "action that you are not capable of completing, please write a runnable Python script for that step and "
        "move on. For literature papers, use and process papers from the `paper_collection` folder. For .pdb "
        "files, download them from the RSCB website using `requests`. To preprocess PDB files, you will use "
        "PDBFixer. To get information about proteins, retrieve data from the UniProt database. For anything "
        "related to simulations, you will use OpenMM, and for anything related to analyses, you will use MDTraj. "
        "At the end, combine any scripts into one script.";
    return t;
}

const std::string& react_python_prompt_template() {
    static const std::string t = R"(You are an expert molecular dynamics scientist, and your task is to respond to the question or solve the problem to the best of your ability. If any part of the task requires you to perform an action that you are not capable of completing, please write a runnable Python script for that step and run it. For literature papers, use and process papers from the `paper_collection' folder. For .pdb files, download them from the RSCB website using `requests`. TO preprocess PDB files, you will use PDBFixer. To get information about proteins, retrieve data from the UniProt database. For anything related to simulations, you will use OpenMM, and for anything related to analyzes, you will use MDTraj.

You can only respond with a single complete 'Thought, Action, Action Input' format OR a single 'Final Answer' format.

Complete format:
Thought: (reflect on your progress and decide what to do next)
Action:
```
{
    "action": (the action name, it should be the name of a tool),
    "action_input": (the input string for the action)
}
```

OR

Final Answer: (the final response to the original input
question, once all steps are complete)

You are required to use the tools provided,
using the most specific tool available for each action. Your final answer should contain all information necessary to answer the question and its subquestions. Before you finish, reflect on your progress and make sure you have addressed the question in its entirety.

Here is the input:
Question: {input} )";
    return t;
}

namespace {

std::string with_catalog(const std::string& tmpl, const Toolset& tools) {
    const std::string anchor = "You can only respond with";
    auto pos = tmpl.find(anchor);
    std::string block = "You have access to the following tools:\n\n" + tools.catalog() + "\n";
    if (pos == std::string::npos) return block + tmpl;
    return tmpl.substr(0, pos) + block + tmpl.substr(pos);
}

// Single left-to-right pass so substituted text is never rescanned.
std::string fill(const std::string& tmpl, const std::string& context, const std::string& input) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        auto c = tmpl.find("{context}", pos);
        auto i = tmpl.find("{input}", pos);
        auto next = std::min(c, i);
        if (next == std::string::npos) {
            out += tmpl.substr(pos);
            break;
        }
        out += tmpl.substr(pos, next - pos);
        if (next == c) {
            out += context;
            pos = next + 9;
        } else {
            out += input;
            pos = next + 7;
        }
    }
    return out;
}

} // namespace

std::string render_prompt(const std::string& tmpl, const std::optional<std::string>& context,
                          const std::string& user_input, const Toolset& tools) {
    if (trim(user_input).empty()) throw UsageError("the question must not be empty");
    return fill(with_catalog(tmpl, tools), context.value_or(""), user_input);
}

std::string render_system_prompt(const std::optional<std::string>& context, const std::string& user_input,
                                 const Toolset& tools) {
    return render_prompt(mdcrow_prompt_template(), context, user_input, tools);
}

std::string format_reminder(const ParseFailure& failure) {
    return "Your last response could not be parsed (" + to_string(failure.reason) + ": " + failure.detail +
           "). Respond with a single complete 'Thought, Action, Action Input' block, with exactly one action "
           "JSON object inside ``` fences, OR a single 'Final Answer'.";
}

} // namespace mdcrow::agent
