#include "mdcrow/sim/script.hpp"

#include "mdcrow/common/strings.hpp"
#include "mdcrow/sim/engine.hpp"
#include "mdcrow/sim/forcefield.hpp"

#include <cmath>
#include <map>

namespace mdcrow::sim {

std::vector<Command> default_protocol(const SystemSpec& spec) {
    return {{Command::Kind::minimize, 0.0, kDefaultMinimizeIterations},
            {Command::Kind::temperature, spec.temperature, 0},
            {Command::Kind::run, 0.0, spec.n_steps}};
}

long long total_steps(const std::vector<Command>& commands) {
    long long n = 0;
    for (const auto& c : commands)
        if (c.kind == Command::Kind::run) n += c.count;
    return n;
}

RunScript emit_script(const SystemSpec& spec) {
    validate_spec(spec);
    const auto hash = spec_hash(spec);
    std::string t;
    t += "# MDCrow run script (toy engine dialect)\n";
    t += "# spec_hash: " + hash + "\n";
    t += "# Edit the [integration] block to change the protocol.\n\n";
    t += "[system]\n";
    for (const auto& line : split(canonical_spec_text(spec), '\n')) {
        if (line.empty() || starts_with_icase(line, "record_interval")) continue;
        t += line + "\n";
    }
    t += "\n[integration]\n";
    for (const auto& c : default_protocol(spec)) {
        switch (c.kind) {
            case Command::Kind::minimize: t += "minimize " + std::to_string(c.count) + "\n"; break;
            case Command::Kind::temperature: t += "temperature " + format_number(c.value) + "\n"; break;
            case Command::Kind::run: t += "run " + std::to_string(c.count) + "\n"; break;
        }
    }
    t += "\n[output]\n";
    t += "record_interval = " + std::to_string(spec.record_interval) + "\n";
    t += "trajectory = trajectory.mdtrj\n";
    t += "state_log = state_log.csv\n";
    return {t, hash};
}

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw ScriptError("run script line " + std::to_string(line) + ": " + what);
}

long long count_arg(int line, const std::string& tok, const char* what) {
    long long v = 0;
    try {
        v = parse_int(tok, what);
    } catch (const ParseError&) {
        fail(line, std::string("expected an integer ") + what + ", got '" + tok + "'");
    }
    if (v < 0) fail(line, std::string(what) + " must be >= 0");
    return v;
}

double temp_arg(int line, const std::string& tok) {
    double v = 0;
    try {
        v = parse_double(tok, "temperature");
    } catch (const ParseError&) {
        fail(line, "expected a temperature in K, got '" + tok + "'");
    }
    if (!(v >= 0) || !std::isfinite(v)) fail(line, "temperature must be >= 0 K");
    return v;
}

} // namespace

ParsedScript parse_script(std::string_view text) {
    ParsedScript out;
    enum class Section { none, system, integration, output } section = Section::none;
    std::map<std::string, std::string> system, output;
    bool seen_system = false, seen_integration = false, seen_output = false;

    struct Frame {
        long long times;
        std::vector<Command> body;
        int line;
    };
    std::vector<Frame> stack{{1, {}, 0}};

    auto lines = split(text, '\n');
    for (std::size_t li = 0; li < lines.size(); ++li) {
        const int ln = static_cast<int>(li) + 1;
        std::string raw = lines[li];
        auto hash_pos = raw.find('#');
        if (hash_pos != std::string::npos) {
            std::string comment = trim(raw.substr(hash_pos + 1));
            if (starts_with_icase(comment, "spec_hash:")) out.declared_hash = trim(comment.substr(10));
            raw = raw.substr(0, hash_pos);
        }
        std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(ln, "malformed section header '" + line + "'");
            auto name = to_lower(trim(line.substr(1, line.size() - 2)));
            if (stack.size() > 1) fail(stack.back().line, "'repeat' block is not closed with 'end'");
            if (name == "system") {
                if (seen_system) fail(ln, "duplicate [system] section");
                section = Section::system;
                seen_system = true;
            } else if (name == "integration") {
                if (seen_integration) fail(ln, "duplicate [integration] section");
                section = Section::integration;
                seen_integration = true;
            } else if (name == "output") {
                if (seen_output) fail(ln, "duplicate [output] section");
                section = Section::output;
                seen_output = true;
            } else {
                fail(ln, "unknown section [" + name + "]; expected [system], [integration] or [output]");
            }
            continue;
        }

        switch (section) {
            case Section::none:
                fail(ln, "statement outside of a section: '" + line + "'");
            case Section::system:
            case Section::output: {
                auto eq = line.find('=');
                if (eq == std::string::npos) fail(ln, "expected 'key = value', got '" + line + "'");
                auto key = to_lower(trim(line.substr(0, eq)));
                auto value = trim(line.substr(eq + 1));
                if (key.empty() || value.empty()) fail(ln, "expected 'key = value', got '" + line + "'");
                auto& target = section == Section::system ? system : output;
                if (target.count(key)) fail(ln, "duplicate key '" + key + "'");
                target[key] = value;
                break;
            }
            case Section::integration: {
                auto tok = split_ws(line);
                const auto cmd = to_lower(tok[0]);
                auto want = [&](std::size_t n) {
                    if (tok.size() != n + 1)
                        fail(ln, "'" + cmd + "' takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s"));
                };
                auto& body = stack.back().body;
                if (cmd == "minimize") {
                    want(1);
                    body.push_back({Command::Kind::minimize, 0.0, count_arg(ln, tok[1], "iteration count")});
                } else if (cmd == "temperature") {
                    want(1);
                    body.push_back({Command::Kind::temperature, temp_arg(ln, tok[1]), 0});
                } else if (cmd == "run") {
                    want(1);
                    body.push_back({Command::Kind::run, 0.0, count_arg(ln, tok[1], "step count")});
                } else if (cmd == "ramp") {
                    want(4);
                    const double t0 = temp_arg(ln, tok[1]), t1 = temp_arg(ln, tok[2]);
                    const long long stages = count_arg(ln, tok[3], "stage count");
                    const long long steps = count_arg(ln, tok[4], "step count");
                    if (stages < 1) fail(ln, "ramp needs at least one stage");
                    for (long long s = 0; s < stages; ++s) {
                        const double t = stages == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(s) / (stages - 1);
                        body.push_back({Command::Kind::temperature, t, 0});
                        body.push_back({Command::Kind::run, 0.0, steps});
                    }
                } else if (cmd == "repeat") {
                    want(1);
                    stack.push_back({count_arg(ln, tok[1], "repeat count"), {}, ln});
                } else if (cmd == "end") {
                    want(0);
                    if (stack.size() == 1) fail(ln, "'end' without 'repeat'");
                    Frame f = std::move(stack.back());
                    stack.pop_back();
                    auto& parent = stack.back().body;
                    if (static_cast<double>(f.body.size()) * static_cast<double>(f.times) > 1e6)
                        fail(f.line, "repeat block expands to too many commands");
                    for (long long r = 0; r < f.times; ++r) parent.insert(parent.end(), f.body.begin(), f.body.end());
                } else {
                    fail(ln, "unknown command '" + tok[0] + "'; expected minimize, temperature, run, ramp, repeat or end");
                }
                if (stack.front().body.size() > 1'000'000) fail(ln, "integration block is too long");
                break;
            }
        }
    }
    if (stack.size() > 1) fail(stack.back().line, "'repeat' block is not closed with 'end'");
    if (!seen_system) throw ScriptError("run script has no [system] section");
    if (!seen_integration) throw ScriptError("run script has no [integration] section");
    if (!seen_output) throw ScriptError("run script has no [output] section");

    out.commands = std::move(stack.front().body);
    const long long steps = total_steps(out.commands);
    if (steps < 1) throw ScriptError("run script: [integration] runs no dynamics (add 'run N')");
    if (steps > kMaxScriptSteps) throw ScriptError("run script: [integration] runs too many steps");

    for (const auto& [k, v] : output)
        if (k != "record_interval" && k != "trajectory" && k != "state_log")
            throw ScriptError("run script: unknown [output] key '" + k + "'");
    if (!output.count("record_interval")) throw ScriptError("run script: [output] needs record_interval");

    std::string kv;
    for (const auto& [k, v] : system) {
        if (k == "n_steps" || k == "record_interval") continue;
        if (to_lower(v) == "none") continue;
        kv += k + "=\"" + v + "\" ";
    }
    kv += "n_steps=" + std::to_string(steps) + " record_interval=\"" + output["record_interval"] + "\"";
    try {
        out.spec = validate_and_complete_spec(kv).spec;
    } catch (const Error& e) {
        throw ScriptError(std::string("run script [system]: ") + e.what());
    }
    return out;
}

std::string stamp_hash(std::string_view text, const std::string& hash) {
    auto lines = split(text, '\n');
    for (auto& l : lines) {
        auto t = trim(l);
        if (!t.empty() && t.front() == '#' && starts_with_icase(trim(t.substr(1)), "spec_hash:")) {
            l = "# spec_hash: " + hash;
            return join(lines, "\n");
        }
    }
    return "# spec_hash: " + hash + "\n" + std::string(text);
}

Trajectory ToyEngine::execute(const SystemSpec& spec, const std::vector<Command>& protocol,
                              const chem::Structure& input) {
    if (input.empty()) throw UsageError("structure has no atoms");
    chem::Structure s = input;
    solvation_.reset();
    if (spec.solvation) {
        auto r = solvate(input, *spec.solvation, spec.seed);
        s = r.structure;
        solvation_ = std::move(r);
    }
    Simulation sim(build_toy_system(s, spec.forcefield_id, spec.nonbonded_cutoff), s, engine_params(spec));
    for (const auto& c : protocol) {
        switch (c.kind) {
            case Command::Kind::minimize: sim.minimize(static_cast<int>(std::min<long long>(c.count, 1'000'000))); break;
            case Command::Kind::temperature: sim.set_temperature(c.value); break;
            case Command::Kind::run: sim.run(c.count); break;
        }
    }
    return sim.trajectory();
}

ParsedScript ToyEngine::dry_run(std::string_view script_text) const { return parse_script(script_text); }

SimulationRun run_simulation(const SystemSpec& spec, const chem::Structure& input, EngineAdapter& engine) {
    validate_spec(spec);
    SimulationRun out;
    out.script = emit_script(spec);
    out.trajectory = engine.execute(spec, default_protocol(spec), input);
    out.solvation = engine.last_solvation();
    return out;
}

Trajectory execute_script(const RunScript& script, const chem::Structure& input, EngineAdapter& engine) {
    auto parsed = engine.dry_run(script.text);
    return engine.execute(parsed.spec, parsed.commands, input);
}

namespace {

std::string extract_script(const std::string& reply) {
    auto open = reply.find("```");
    if (open == std::string::npos) return reply;
    auto body_start = reply.find('\n', open);
    if (body_start == std::string::npos) return reply;
    auto close = reply.find("```", body_start);
    if (close == std::string::npos) return reply.substr(body_start + 1);
    return reply.substr(body_start + 1, close - body_start - 1);
}

} // namespace

RunScript modify_script(const RunScript& script, std::string_view instruction, const TextModel& model,
                        const EngineAdapter& engine) {
    if (trim(instruction).empty()) throw UsageError("modify_script needs a non-empty instruction");
    std::string prompt =
        "You are editing a molecular dynamics run script for the " + engine.name() +
        " engine. Apply the requested change and return the complete modified script in a single fenced "
        "code block.\n"
        "Keep the [system], [integration] and [output] sections. Integration commands: minimize N, "
        "temperature K, run N, ramp T0 T1 STAGES STEPS, repeat N ... end.\n\n"
        "Request: " + std::string(instruction) + "\n\nScript:\n```\n" + script.text + "```\n";

    std::string first_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string reply = model(prompt);
        std::string text = extract_script(reply);
        try {
            auto parsed = engine.dry_run(text);
            auto hash = spec_hash(parsed.spec);
            return {stamp_hash(text, hash), hash};
        } catch (const ScriptError& e) {
            if (attempt == 0) {
                first_error = e.what();
                prompt += "\nThe script you returned failed the syntax check:\n" + first_error +
                          "\nReturn a corrected complete script.\n";
            } else {
                throw Error("modified script rejected by the dry run twice. First attempt: " + first_error +
                            ". Second attempt: " + e.what());
            }
        }
    }
    throw Error("unreachable");
}

} // namespace mdcrow::sim
