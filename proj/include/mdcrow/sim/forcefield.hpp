#pragma once

#include "mdcrow/chem/structure.hpp"
#include "mdcrow/common/error.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace mdcrow::sim {

// Residue the force field has no template for.
class MissingTemplateError : public Error {
public:
    MissingTemplateError(std::string residue, const std::string& message)
        : Error(message), residue_(std::move(residue)) {}
    const std::string& residue() const { return residue_; }

private:
    std::string residue_;
};

struct BondTerm {
    std::size_t i, j;
    double r0;  // Å
    double k;   // kcal/mol/Å^2, E = k/2 (r - r0)^2
};

struct AngleTerm {
    std::size_t i, j, l;  // j is the vertex
    double theta0;        // rad
    double k;  // kcal/mol/rad^2, E = k/2 (theta - theta0)^2
};

// Harmonic tether of one atom to a point, E = k/2 |x - center|^2.
struct Restraint {
    std::size_t atom;
    Eigen::Vector3d center;
    double k;
};

/// Parameters of the built-in engine: masses, harmonic bonded terms and
/// Lennard-Jones pairs with a shifted cutoff.
struct ToySystem {
    std::vector<double> mass;     // amu
    std::vector<double> sigma;    // Å
    std::vector<double> epsilon;  // kcal/mol
    std::vector<BondTerm> bonds;
    std::vector<AngleTerm> angles;
    std::vector<Restraint> restraints;
    std::vector<std::vector<std::size_t>> exclusions;  // sorted, both directions
    std::vector<int> molecule;                          // connected component per atom
    int n_molecules = 0;
    std::optional<Eigen::Vector3d> box;
    double cutoff = 10.0;
    bool nonbonded = true;

    std::size_t size() const { return mass.size(); }
};

inline constexpr double kBondK = 300.0;
inline constexpr double kAngleK = 60.0;

// Free particles with element LJ parameters and no bonded terms.
ToySystem free_particles(const chem::Structure& s, double cutoff);

// Bonds perceived from geometry (equilibrium at the input distances),
// angles from bonded triples, exclusions up to three bonds. Named force
// fields only accept residues they have templates for; "toy" accepts any.
ToySystem build_toy_system(const chem::Structure& s, const std::string& forcefield_id, double cutoff);

// Fills molecule ids and exclusions from the bond list.
void finalize_topology(ToySystem& sys);

} // namespace mdcrow::sim
