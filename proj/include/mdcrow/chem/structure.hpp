#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace mdcrow::chem {

enum class StructureSource { fetched, cleaned, solvated, generated };

std::string to_string(StructureSource s);

struct Atom {
    int serial = 0;
    std::string name;
    std::string element;
    std::string res_name;
    int res_seq = 0;
    char icode = ' ';
    char chain = 'A';
    bool hetero = false;
    double occupancy = 1.0;
    double b_factor = 0.0;
    Eigen::Vector3d pos = Eigen::Vector3d::Zero();
};

/// Atoms of model 1, in file order, plus an optional orthorhombic box.
///
/// Structures are treated as values: every tool returns a new one.
struct Structure {
    std::vector<Atom> atoms;
    std::optional<Eigen::Vector3d> box;  // edge lengths in Å
    StructureSource source = StructureSource::fetched;
    std::string provenance;

    std::size_t size() const { return atoms.size(); }
    bool empty() const { return atoms.empty(); }

    Eigen::Matrix3Xd coordinates() const;
    void set_coordinates(const Eigen::Matrix3Xd& xyz);
};

struct ResidueKey {
    char chain;
    int seq;
    char icode;
    friend bool operator==(const ResidueKey&, const ResidueKey&) = default;
};

struct Residue {
    ResidueKey key;
    std::string name;
    std::vector<std::size_t> atoms;  // indices into Structure::atoms

    std::optional<std::size_t> find(const Structure& s, std::string_view atom_name) const;
};

// Consecutive atoms with the same (chain, seq, icode) form a residue.
std::vector<Residue> residues(const Structure& s);

// Chain identifiers in first-appearance order.
std::vector<char> chain_ids(const Structure& s);

// Renumbers serials 1..N.
void renumber(Structure& s);

std::vector<double> masses(const Structure& s);

} // namespace mdcrow::chem
