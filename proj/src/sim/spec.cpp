#include "mdcrow/sim/spec.hpp"

#include "mdcrow/common/hash.hpp"
#include "mdcrow/common/kv.hpp"
#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

namespace mdcrow::sim {

std::string to_string(Ensemble e) {
    switch (e) {
        case Ensemble::NVE: return "NVE";
        case Ensemble::NVT: return "NVT";
        case Ensemble::NPT: return "NPT";
    }
    return "?";
}

std::string to_string(Solvent s) {
    switch (s) {
        case Solvent::water: return "water";
        case Solvent::methanol: return "methanol";
        case Solvent::acetonitrile: return "acetonitrile";
    }
    return "?";
}

double default_density(Solvent s) {
    switch (s) {
        case Solvent::water: return 0.997;
        case Solvent::methanol: return 0.792;
        case Solvent::acetonitrile: return 0.786;
    }
    return 1.0;
}

const std::vector<std::string>& known_forcefields() {
    static const std::vector<std::string> ids{
        "amber14-all.xml", "amber14/protein.ff14SB.xml", "amber99sbildn.xml", "amber99sb.xml",
        "amber03.xml",     "charmm36.xml",               "toy",
    };
    return ids;
}

long long default_record_interval(long long n_steps) {
    return std::max<long long>(1, n_steps / kMaxFrames + 1);
}

namespace {

// canonical key -> accepted spellings
const std::map<std::string, std::vector<std::string>>& aliases() {
    static const std::map<std::string, std::vector<std::string>> a{
        {"structure", {"structure", "pdb", "pdb_file", "file_id", "file", "input"}},
        {"forcefield", {"forcefield", "forcefield_id", "forcefield_files", "ff"}},
        {"ensemble", {"ensemble"}},
        {"temperature", {"temperature", "temp", "t"}},
        {"pressure", {"pressure", "p"}},
        {"timestep", {"timestep", "dt", "time_step"}},
        {"n_steps", {"n_steps", "steps", "nsteps", "number_of_steps"}},
        {"friction", {"friction", "gamma", "collision_rate"}},
        {"cutoff", {"cutoff", "nonbonded_cutoff"}},
        {"record_interval", {"record_interval", "report_interval", "record_every", "interval"}},
        {"seed", {"seed"}},
        {"solvent", {"solvent", "solvation"}},
        {"box_edge", {"box_edge", "box", "box_size"}},
        {"padding", {"padding"}},
        {"density", {"density", "target_density"}},
        {"min_distance", {"min_distance", "tolerance"}},
    };
    return a;
}

const std::map<std::string, std::string>& examples() {
    static const std::map<std::string, std::string> e{
        {"structure", "structure=str_0001"},
        {"forcefield", "forcefield=amber14-all.xml"},
        {"ensemble", "ensemble=NVT"},
        {"temperature", "temperature=300"},
        {"pressure", "pressure=1"},
        {"timestep", "timestep=2"},
        {"n_steps", "n_steps=5000"},
        {"friction", "friction=1"},
        {"cutoff", "cutoff=10"},
        {"record_interval", "record_interval=100"},
        {"seed", "seed=42"},
        {"solvent", "solvent=water"},
        {"box_edge", "box_edge=40"},
        {"padding", "padding=10"},
        {"density", "density=0.997"},
        {"min_distance", "min_distance=2.0"},
    };
    return e;
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw SpecError(field, "Invalid simulation input: field '" + field + "' " + what + ". Example: " +
                               examples().at(field));
}

struct Unit {
    const char* suffix;
    double factor;
};

// Number with an optional unit suffix from the allowed list.
double number(const std::string& field, const std::string& text, std::initializer_list<Unit> units) {
    std::string t = trim(text);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr == t.data()) fail(field, "has unparsable value '" + text + "'");
    std::string rest = to_lower(trim(std::string_view(ptr, t.data() + t.size() - ptr)));
    if (!rest.empty()) {
        bool ok = false;
        for (const auto& u : units)
            if (rest == u.suffix) {
                v *= u.factor;
                ok = true;
                break;
            }
        if (!ok) fail(field, "has unrecognized unit '" + rest + "'");
    }
    if (!std::isfinite(v)) fail(field, "must be finite");
    return v;
}

long long integer(const std::string& field, const std::string& text) {
    std::string t = trim(text);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec == std::errc() && ptr == t.data() + t.size()) return v;
    // tolerate 5e4 style step counts when they are whole numbers
    double d = 0;
    auto [p2, e2] = std::from_chars(t.data(), t.data() + t.size(), d);
    if (e2 == std::errc() && p2 == t.data() + t.size() && std::floor(d) == d && std::abs(d) < 9e15)
        return static_cast<long long>(d);
    fail(field, "has unparsable integer value '" + text + "'");
}

constexpr Unit kLength[] = {{"a", 1.0}, {"å", 1.0}, {"angstrom", 1.0}, {"angstroms", 1.0}, {"nm", 10.0}};

double length(const std::string& field, const std::string& text) {
    return number(field, text, {kLength[0], kLength[1], kLength[2], kLength[3], kLength[4]});
}

Ensemble parse_ensemble(const std::string& text) {
    auto u = to_upper(trim(text));
    if (u == "NVE") return Ensemble::NVE;
    if (u == "NVT") return Ensemble::NVT;
    if (u == "NPT") return Ensemble::NPT;
    fail("ensemble", "must be one of NVE, NVT, NPT (got '" + text + "')");
}

Solvent parse_solvent(const std::string& text) {
    auto l = to_lower(trim(text));
    if (l == "water" || l == "tip3p" || l == "hoh") return Solvent::water;
    if (l == "methanol" || l == "meoh" || l == "moh") return Solvent::methanol;
    if (l == "acetonitrile" || l == "acn" || l == "mecn") return Solvent::acetonitrile;
    fail("solvent", "must be one of water, methanol, acetonitrile (got '" + text + "')");
}

void check_ranges(const SystemSpec& s) {
    if (s.structure.empty()) fail("structure", "is missing");
    if (std::find(known_forcefields().begin(), known_forcefields().end(), s.forcefield_id) ==
        known_forcefields().end())
        fail("forcefield", "names unknown forcefield '" + s.forcefield_id + "' (known: " +
                               join(known_forcefields(), ", ") + ")");
    if (s.ensemble != Ensemble::NVE && !(s.temperature > 0))
        fail("temperature", "must be > 0 K for " + to_string(s.ensemble));
    if (s.temperature < 0) fail("temperature", "must be >= 0 K");
    if (!(s.timestep > 0 && s.timestep <= 5)) fail("timestep", "must be in (0, 5] fs");
    if (s.n_steps < 1) fail("n_steps", "must be >= 1");
    if (s.friction < 0) fail("friction", "must be >= 0 /ps");
    if (!(s.nonbonded_cutoff > 0)) fail("cutoff", "must be > 0 Å");
    if (s.record_interval < 1 || s.record_interval > s.n_steps)
        fail("record_interval", "must be between 1 and n_steps");
    if (s.pressure && !(*s.pressure > 0)) fail("pressure", "must be > 0 atm");
    if (s.ensemble == Ensemble::NPT && !s.pressure) fail("pressure", "is required for NPT");
    if (s.solvation) {
        const auto& v = *s.solvation;
        if (v.box_edge && v.padding) fail("box_edge", "cannot be combined with padding; give one of them");
        if (!v.box_edge && !v.padding) fail("padding", "or box_edge is required for solvation");
        if (v.box_edge && !(*v.box_edge > 0)) fail("box_edge", "must be > 0 Å");
        if (v.padding && *v.padding < 0) fail("padding", "must be >= 0 Å");
        if (!(v.target_density > 0 && v.target_density < 3)) fail("density", "must be in (0, 3) g/cm^3");
        if (!(v.min_distance > 0)) fail("min_distance", "must be > 0 Å");
    }
}

} // namespace

void validate_spec(const SystemSpec& spec) { check_ranges(spec); }

SpecCompletion validate_and_complete_spec(std::string_view raw) {
    ToolArgs args;
    try {
        args = ToolArgs::parse(raw);
    } catch (const ParseError& e) {
        throw SpecError("input", std::string("Invalid simulation input: ") + e.what());
    }

    std::map<std::string, std::string> given;
    for (const auto& [key, value] : args.named()) {
        std::string canon;
        for (const auto& [c, names] : aliases())
            if (std::find(names.begin(), names.end(), key) != names.end()) canon = c;
        if (canon.empty()) {
            std::vector<std::string> keys;
            for (const auto& kv : aliases()) keys.push_back(kv.first);
            throw SpecError(key, "Invalid simulation input: unknown field '" + key + "'. Valid fields: " +
                                     join(keys, ", ") + ". Example: structure=str_0001 n_steps=5000");
        }
        if (given.count(canon)) fail(canon, "is given twice");
        given[canon] = value;
    }
    const auto& pos = args.positional();
    if (pos.size() == 1 && !given.count("structure")) {
        given["structure"] = pos[0];
    } else if (!pos.empty()) {
        throw SpecError("input", "Invalid simulation input: unexpected bare token '" + pos.back() +
                                     "'; use key=value pairs. Example: structure=str_0001 n_steps=5000");
    }

    SpecCompletion out;
    auto& s = out.spec;
    auto note = [&](const std::string& n) { out.notes.push_back(n); };

    if (!given.count("structure") || trim(given["structure"]).empty()) fail("structure", "is missing");
    s.structure = trim(given["structure"]);

    if (given.count("forcefield")) {
        s.forcefield_id = trim(given["forcefield"]);
    } else {
        s.forcefield_id = kDefaultForcefield;
        note(std::string("forcefield not given; using default ") + kDefaultForcefield);
    }
    if (given.count("ensemble")) {
        s.ensemble = parse_ensemble(given["ensemble"]);
    } else {
        s.ensemble = Ensemble::NVT;
        note("ensemble not given; using default NVT");
    }
    if (given.count("temperature")) {
        s.temperature = number("temperature", given["temperature"], {{"k", 1.0}, {"kelvin", 1.0}});
    } else {
        s.temperature = kDefaultTemperature;
        note("temperature not given; using default 300 K");
    }
    if (given.count("pressure")) {
        s.pressure = number("pressure", given["pressure"], {{"atm", 1.0}, {"bar", 1.0 / 1.01325}});
        if (s.ensemble != Ensemble::NPT) note("pressure is ignored outside NPT");
    } else if (s.ensemble == Ensemble::NPT) {
        s.pressure = kDefaultPressureAtm;
        note("no pressure given for NPT; using default pressure of 1 atm");
    }
    if (given.count("timestep")) {
        s.timestep = number("timestep", given["timestep"], {{"fs", 1.0}, {"ps", 1000.0}});
    } else {
        s.timestep = kDefaultTimestepFs;
        note("timestep not given; using default 2 fs");
    }
    if (!given.count("n_steps")) fail("n_steps", "is missing");
    s.n_steps = integer("n_steps", given["n_steps"]);
    if (given.count("friction")) {
        s.friction = number("friction", given["friction"], {{"/ps", 1.0}, {"ps-1", 1.0}, {"ps^-1", 1.0}, {"1/ps", 1.0}});
    } else {
        s.friction = kDefaultFriction;
        if (s.ensemble != Ensemble::NVE) note("friction not given; using default 1/ps");
    }
    if (given.count("cutoff")) {
        s.nonbonded_cutoff = length("cutoff", given["cutoff"]);
    } else {
        s.nonbonded_cutoff = kDefaultCutoff;
        note("nonbonded cutoff not given; using default 10 Å");
    }
    if (given.count("seed")) {
        long long seed = integer("seed", given["seed"]);
        if (seed < 0) fail("seed", "must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
    } else {
        s.seed = 0;
        note("seed not given; using 0");
    }

    bool solvated = given.count("solvent") || given.count("box_edge") || given.count("padding") ||
                    given.count("density") || given.count("min_distance");
    if (solvated) {
        SolvationSpec v;
        if (given.count("solvent")) {
            v.solvent = parse_solvent(given["solvent"]);
        } else {
            note("solvent not given; using water");
        }
        if (given.count("box_edge")) v.box_edge = length("box_edge", given["box_edge"]);
        if (given.count("padding")) v.padding = length("padding", given["padding"]);
        if (!v.box_edge && !v.padding) {
            v.padding = kDefaultPadding;
            note("solvation box not given; using padding 10 Å");
        }
        if (given.count("density")) {
            v.target_density = number("density", given["density"], {{"g/cm3", 1.0}, {"g/cm^3", 1.0}, {"g/ml", 1.0}});
        } else {
            v.target_density = default_density(v.solvent);
        }
        if (given.count("min_distance")) v.min_distance = length("min_distance", given["min_distance"]);
        s.solvation = v;
    }

    if (s.n_steps >= 1) {
        if (given.count("record_interval")) {
            s.record_interval = integer("record_interval", given["record_interval"]);
        } else {
            s.record_interval = default_record_interval(s.n_steps);
            note("record_interval not given; recording every " + std::to_string(s.record_interval) + " steps (" +
                 std::to_string(expected_frames(s.n_steps, s.record_interval)) + " frames)");
        }
    }
    check_ranges(s);
    return out;
}

std::string canonical_spec_text(const SystemSpec& s) {
    auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("none"); };
    std::string t;
    auto line = [&](const char* k, const std::string& v) { t += std::string(k) + " = " + v + "\n"; };
    line("structure", s.structure);
    line("forcefield", s.forcefield_id);
    line("ensemble", to_string(s.ensemble));
    line("temperature", format_number(s.temperature));
    line("pressure", opt(s.pressure));
    line("timestep", format_number(s.timestep));
    line("n_steps", std::to_string(s.n_steps));
    line("friction", format_number(s.friction));
    line("cutoff", format_number(s.nonbonded_cutoff));
    line("seed", std::to_string(s.seed));
    if (s.solvation) {
        const auto& v = *s.solvation;
        line("solvent", to_string(v.solvent));
        line("box_edge", opt(v.box_edge));
        line("padding", opt(v.padding));
        line("density", format_number(v.target_density));
        line("min_distance", format_number(v.min_distance));
    } else {
        line("solvent", "none");
    }
    line("record_interval", std::to_string(s.record_interval));
    return t;
}

std::string spec_hash(const SystemSpec& spec) { return sha256_hex(canonical_spec_text(spec)); }

} // namespace mdcrow::sim
