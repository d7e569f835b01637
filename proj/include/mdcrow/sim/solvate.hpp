#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/sim/spec.hpp"

#include <cstdint>

namespace mdcrow::sim {

struct SolvationResult {
    chem::Structure structure;
    long long n_molecules = 0;
    long long target_molecules = 0;
    double density = 0.0;  // g/cm^3 of solvent over the free volume
    bool reached_target = false;
    long long attempts = 0;
};

inline constexpr long long kMaxConsecutiveRejections = 1'000'000;

// One solvent molecule centered on its center of mass.
chem::Structure solvent_template(Solvent s);
double solvent_molar_mass(Solvent s);

// Number of molecules giving `density` (g/cm^3) in `volume` (Å^3).
long long molecules_for_density(double density, double volume, double molar_mass);

// Random insertion with rejection in a cubic periodic box. The solute is
// centered in the box.
SolvationResult solvate(const chem::Structure& solute, const SolvationSpec& spec, std::uint64_t seed);

} // namespace mdcrow::sim
