#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/common/error.hpp"
#include "mdcrow/sim/solvate.hpp"
#include "mdcrow/sim/spec.hpp"
#include "mdcrow/sim/trajectory.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::sim {

/// Editable run script in the toy-engine dialect:
///
///   # spec_hash: <sha256>
///   [system]        key = value, one per spec field
///   [integration]   minimize N | temperature K | run N |
///                   ramp T0 T1 STAGES STEPS | repeat N ... end
///   [output]        record_interval = N
struct RunScript {
    std::string text;
    std::string spec_hash;
};

struct Command {
    enum class Kind { minimize, temperature, run };
    Kind kind;
    double value = 0.0;    // temperature
    long long count = 0;   // iterations or steps
    friend bool operator==(const Command&, const Command&) = default;
};

struct ParsedScript {
    SystemSpec spec;
    std::vector<Command> commands;
    std::optional<std::string> declared_hash;  // from the header comment
};

// Syntax or content error; the message carries the line number.
class ScriptError : public ParseError {
public:
    using ParseError::ParseError;
};

inline constexpr long long kMaxScriptSteps = 100'000'000;

// Default protocol for a spec: minimize, set temperature, run n_steps.
std::vector<Command> default_protocol(const SystemSpec& spec);

RunScript emit_script(const SystemSpec& spec);

// Parses and validates a script. n_steps of the returned spec is the total
// number of steps the integration block runs.
ParsedScript parse_script(std::string_view text);

long long total_steps(const std::vector<Command>& commands);

/// Contract between the tools and a concrete MD package.
class EngineAdapter {
public:
    virtual ~EngineAdapter() = default;
    virtual std::string name() const = 0;

    // Runs a protocol from the input structure (solvating first if asked).
    virtual Trajectory execute(const SystemSpec& spec, const std::vector<Command>& protocol,
                               const chem::Structure& input) = 0;

    // Syntax and content check without running anything. Throws ScriptError.
    virtual ParsedScript dry_run(std::string_view script_text) const = 0;

    // Solvation report of the last execute, when it solvated.
    virtual std::optional<SolvationResult> last_solvation() const { return std::nullopt; }
};

class ToyEngine : public EngineAdapter {
public:
    std::string name() const override { return "toy"; }
    Trajectory execute(const SystemSpec& spec, const std::vector<Command>& protocol,
                       const chem::Structure& input) override;
    ParsedScript dry_run(std::string_view script_text) const override;
    std::optional<SolvationResult> last_solvation() const override { return solvation_; }

private:
    std::optional<SolvationResult> solvation_;
};

struct SimulationRun {
    Trajectory trajectory;
    RunScript script;
    std::optional<SolvationResult> solvation;
};

SimulationRun run_simulation(const SystemSpec& spec, const chem::Structure& input, EngineAdapter& engine);

Trajectory execute_script(const RunScript& script, const chem::Structure& input, EngineAdapter& engine);

// Takes the prompt, returns the model's reply.
using TextModel = std::function<std::string(const std::string& prompt)>;

// One model call, dry-run check, at most one repair round.
RunScript modify_script(const RunScript& script, std::string_view instruction, const TextModel& model,
                        const EngineAdapter& engine);

// Replaces (or inserts) the spec_hash header line.
std::string stamp_hash(std::string_view text, const std::string& hash);

} // namespace mdcrow::sim
