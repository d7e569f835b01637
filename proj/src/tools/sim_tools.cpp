#include "common.hpp"

#include "mdcrow/chem/pdb_io.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/common/strings.hpp"
#include "mdcrow/sim/engine.hpp"
#include "mdcrow/sim/forcefield.hpp"
#include "mdcrow/sim/solvate.hpp"

#include <cstdio>

namespace mdcrow::tools {

using agent::ToolCategory;
using registry::FileKind;

namespace {

sim::EngineAdapter& engine(ToolContext& ctx) {
    if (!ctx.engine) throw UsageError("no simulation engine configured");
    return *ctx.engine;
}

chem::Structure input_structure(ToolContext& ctx, const std::string& ref) {
    if (detail::files(ctx).contains(ref)) return detail::load_structure(ctx, ref);
    if (fs::exists(ref)) return chem::read_pdb(ref);
    throw NotFoundError("structure '" + ref + "' is neither a registered file id nor an existing path. " +
                        "Registered files:\n" + detail::files(ctx).describe_all());
}

std::string fmt(double v, int prec = 2) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", prec, v);
    return buf;
}

struct Outputs {
    registry::FileEntry trajectory, log;
};

Outputs save_run(ToolContext& ctx, const sim::Trajectory& traj, const std::string& stem, const std::string& what) {
    auto& reg = detail::files(ctx);
    const auto tpath = reg.new_path(stem, ".mdtrj");
    sim::write_trajectory(traj, tpath.string());
    const auto t = reg.register_file(tpath, "trajectory of " + what, FileKind::trajectory);
    const auto l = detail::save_text(ctx, sim::state_log_csv(traj.state_log), stem + "_log", ".csv",
                                     "state log (step, PE, KE, T, V) of " + what, FileKind::state_log);
    return {t, l};
}

std::string run_report(const sim::Trajectory& traj, const Outputs& out) {
    std::string s = "frames: " + std::to_string(traj.n_frames());
    if (!traj.state_log.empty()) {
        const auto& last = traj.state_log.back();
        s += ", final potential energy: " + fmt(last.potential) + " kcal/mol, final temperature: " +
             fmt(last.temperature) + " K";
        if (last.volume > 0) s += ", final volume: " + fmt(last.volume, 1) + " A^3";
    }
    s += "\ntrajectory: " + out.trajectory.file_id + ", state log: " + out.log.file_id;
    return s;
}

// Engine failures carry remedies for the agent.
template <typename F>
auto with_remedies(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const sim::InstabilityError& e) {
        throw Error(std::string("simulation unstable: ") + e.what() +
                    ". Remedies: use a smaller timestep (e.g. timestep=1), minimize or clean the structure first "
                    "(CleaningToolFunction), or lower the temperature.");
    } catch (const sim::MissingTemplateError& e) {
        throw Error(std::string(e.what()) + " Hint: run CleaningToolFunction with remove_heterogens=true, or use "
                                            "forcefield=toy.");
    }
}

sim::RunScript load_script(ToolContext& ctx, const std::string& id) {
    const auto e = detail::files(ctx).get(trim(id));
    if (e.kind != FileKind::script) throw UsageError(e.file_id + " is not a run script (scr_...)");
    const auto text = read_file(detail::files(ctx).resolve(e.file_id).string());
    const auto parsed = engine(ctx).dry_run(text);
    return {text, parsed.declared_hash.value_or(sim::spec_hash(parsed.spec))};
}

} // namespace

void add_sim_tools(agent::Toolset& set, ToolContext& ctx) {
    set.add({"SetUpandRunFunction", ToolCategory::simulation,
             "Set up and run a molecular dynamics simulation. Missing parameters get documented defaults, which "
             "are echoed back. Registers the trajectory, the state log and an editable run script.",
             "structure=<str_...> n_steps=<int> [ensemble=NVT|NPT|NVE] [temperature=300K] [pressure=1atm] "
             "[timestep=2fs] [friction=1/ps] [cutoff=10A] [forcefield=amber14-all.xml] [record_interval=<int>] "
             "[seed=<int>] [solvent=water|methanol|acetonitrile padding=10A | box_edge=<A>] [density=<g/cm3>]",
             [&ctx](const std::string& in) {
                 const auto completion = sim::validate_and_complete_spec(in);
                 const auto& spec = completion.spec;
                 const auto input = input_structure(ctx, spec.structure);
                 auto run = with_remedies([&] { return sim::run_simulation(spec, input, engine(ctx)); });
                 const std::string what = spec.structure + " (" + sim::to_string(spec.ensemble) + ", " +
                                          std::to_string(spec.n_steps) + " steps)";
                 const auto out = save_run(ctx, run.trajectory, spec.structure + "_sim", what);
                 const auto scr = detail::save_text(ctx, run.script.text, spec.structure + "_run", ".mdscript",
                                                    "run script of " + what, FileKind::script);
                 std::string obs = "Simulation of " + spec.structure + " finished (" + sim::to_string(spec.ensemble) +
                                   ", " + std::to_string(spec.n_steps) + " steps of " + format_number(spec.timestep) +
                                   " fs at " + format_number(spec.temperature) + " K).\n";
                 for (const auto& n : completion.notes) obs += "note: " + n + "\n";
                 if (run.solvation) {
                     const auto& sv = *run.solvation;
                     obs += "solvation: " + std::to_string(sv.n_molecules) + " of " +
                            std::to_string(sv.target_molecules) + " target molecules, density " + fmt(sv.density, 3) +
                            " g/cm^3" + (sv.reached_target ? "" : " (target density not reached)") + "\n";
                 }
                 obs += run_report(run.trajectory, out) + ", run script: " + scr.file_id;
                 return obs;
             }});

    set.add({"ValidateSimulationInput", ToolCategory::simulation,
             "Check simulation parameters without running. Reports the completed parameter set and any defaults "
             "that would be filled.",
             "same arguments as SetUpandRunFunction",
             [](const std::string& in) {
                 const auto c = sim::validate_and_complete_spec(in);
                 std::string obs = "Valid simulation input:\n" + sim::canonical_spec_text(c.spec);
                 for (const auto& n : c.notes) obs += "note: " + n + "\n";
                 return obs;
             }});

    set.add({"SolvateStructure", ToolCategory::simulation,
             "Fill a cubic periodic box around a structure with solvent (water, methanol or acetonitrile) and "
             "register the solvated structure.",
             "file_id=<str_...> [solvent=water] [padding=10] | [box_edge=<A>] [density=<g/cm3>] [min_distance=2] "
             "[seed=0]",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("file_id");
                 if (!id) throw UsageError("give the structure file id, e.g. file_id=str_0001");
                 // Reuse the spec parser for solvent, sizes and units.
                 std::string raw = "structure=" + *id + " n_steps=1";
                 for (const auto& [k, v] : args.named())
                     if (k != "file_id") raw += " " + k + "=\"" + v + "\"";
                 if (!args.has("solvent") && !args.has("solvation")) raw += " solvent=water";
                 if (!args.has("padding") && !args.has("box_edge") && !args.has("box") && !args.has("box_size"))
                     raw += " padding=10";
                 const auto spec = sim::validate_and_complete_spec(raw).spec;
                 const auto r = sim::solvate(detail::load_structure(ctx, *id), *spec.solvation, spec.seed);
                 const auto e = detail::save_structure(ctx, r.structure, *id + "_solv",
                                                       *id + " in " + sim::to_string(spec.solvation->solvent));
                 return "Solvated " + *id + " in " + sim::to_string(spec.solvation->solvent) + " -> " + e.file_id +
                        ": " + std::to_string(r.n_molecules) + " of " + std::to_string(r.target_molecules) +
                        " target molecules, density " + fmt(r.density, 3) + " g/cm^3, box edge " +
                        fmt(r.structure.box ? r.structure.box->x() : 0.0, 2) + " A" +
                        (r.reached_target ? "." : " (target density not reached).");
             }});

    set.add({"ModifyScriptTool", ToolCategory::simulation,
             "Edit a registered run script following an instruction (e.g. add an annealing temperature ramp). "
             "The edit is syntax-checked by the engine before it is accepted and registered.",
             "script=<scr_...> instruction=\"<what to change>\"",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("script");
                 if (!id) throw UsageError("give the script file id, e.g. script=scr_0003");
                 const auto instruction = args.require("instruction", "script=scr_0003 instruction=\"...\"");
                 if (!ctx.model) throw UsageError("script modification needs a language model");
                 const auto script = load_script(ctx, *id);
                 sim::TextModel tm = [&ctx](const std::string& prompt) {
                     return ctx.model->complete({{llm::Role::system, "You edit molecular dynamics run scripts."},
                                                 {llm::Role::user, prompt}});
                 };
                 const auto modified = sim::modify_script(script, instruction, tm, engine(ctx));
                 const auto e = detail::save_text(ctx, modified.text, *id + "_mod", ".mdscript",
                                                  "modified " + *id + ": " + instruction, FileKind::script);
                 return "Modified script accepted by the dry run and saved as " + e.file_id +
                        " (spec_hash " + modified.spec_hash.substr(0, 12) + "). Run it with ExecuteScript.";
             }});

    set.add({"ExecuteScript", ToolCategory::simulation,
             "Run a registered run script with the engine and register the trajectory and state log.",
             "script=<scr_...>",
             [&ctx](const std::string& in) {
                 const auto args = ToolArgs::parse(in);
                 const auto id = args.primary("script");
                 if (!id) throw UsageError("give the script file id, e.g. script=scr_0003");
                 const auto script = load_script(ctx, *id);
                 const auto parsed = engine(ctx).dry_run(script.text);
                 const auto input = input_structure(ctx, parsed.spec.structure);
                 auto traj = with_remedies([&] { return sim::execute_script(script, input, engine(ctx)); });
                 const auto out = save_run(ctx, traj, *id + "_exec", "script " + *id);
                 return "Executed " + *id + " (" + std::to_string(sim::total_steps(parsed.commands)) + " steps).\n" +
                        run_report(traj, out);
             }});
}

} // namespace mdcrow::tools
