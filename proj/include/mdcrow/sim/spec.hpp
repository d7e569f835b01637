#pragma once

#include "mdcrow/common/error.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcrow::sim {

enum class Ensemble { NVE, NVT, NPT };
enum class Solvent { water, methanol, acetonitrile };

std::string to_string(Ensemble e);
std::string to_string(Solvent s);

// g/cm^3 targets of the solvent templates.
double default_density(Solvent s);

struct SolvationSpec {
    Solvent solvent = Solvent::water;
    std::optional<double> box_edge;  // Å, cubic
    std::optional<double> padding;   // Å around the solute
    double target_density = 0.997;   // g/cm^3
    double min_distance = 2.0;       // Å

    friend bool operator==(const SolvationSpec&, const SolvationSpec&) = default;
};

struct SystemSpec {
    std::string structure;  // file_id or path
    std::string forcefield_id;
    Ensemble ensemble = Ensemble::NVT;
    double temperature = 300.0;         // K
    std::optional<double> pressure;     // atm
    double timestep = 2.0;              // fs
    long long n_steps = 0;
    double friction = 1.0;              // 1/ps
    double nonbonded_cutoff = 10.0;     // Å
    std::optional<SolvationSpec> solvation;
    long long record_interval = 1;      // steps per frame
    std::uint64_t seed = 0;

    friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// A completed spec plus one note per default that was filled in.
struct SpecCompletion {
    SystemSpec spec;
    std::vector<std::string> notes;
};

// Raised for bad spec input. `field` names the offending key.
class SpecError : public UsageError {
public:
    SpecError(std::string field, const std::string& message)
        : UsageError(message), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

inline constexpr double kDefaultTimestepFs = 2.0;
inline constexpr double kDefaultFriction = 1.0;
inline constexpr double kDefaultCutoff = 10.0;
inline constexpr double kDefaultPressureAtm = 1.0;
inline constexpr double kDefaultTemperature = 300.0;
inline constexpr double kDefaultPadding = 10.0;
inline constexpr long long kMaxFrames = 1000;
inline constexpr const char* kDefaultForcefield = "amber14-all.xml";

const std::vector<std::string>& known_forcefields();

// Parses key=value tool input, checks ranges and fills defaults.
SpecCompletion validate_and_complete_spec(std::string_view raw);

// Checks an already-built spec (same rules, no defaults).
void validate_spec(const SystemSpec& spec);

// Smallest interval giving at most kMaxFrames frames.
long long default_record_interval(long long n_steps);

// One "key = value" line per field, fixed order; also what the hash covers.
std::string canonical_spec_text(const SystemSpec& spec);
std::string spec_hash(const SystemSpec& spec);

// Frames produced by n_steps at a record interval (initial frame included).
inline long long expected_frames(long long n_steps, long long record_interval) {
    return n_steps / record_interval + 1;
}

} // namespace mdcrow::sim
