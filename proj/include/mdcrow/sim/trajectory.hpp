#pragma once

#include "mdcrow/chem/structure.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace mdcrow::sim {

struct StateRecord {
    long long step = 0;
    double time_ps = 0.0;
    double potential = 0.0;    // kcal/mol
    double kinetic = 0.0;      // kcal/mol
    double temperature = 0.0;  // K
    double volume = 0.0;       // Å^3, 0 when non-periodic
};

/// Frames x atoms x 3 coordinates (Å) with the topology they refer to.
struct Trajectory {
    chem::Structure topology;
    std::vector<Eigen::Matrix3Xd> frames;
    std::vector<double> times;                 // ps
    std::vector<Eigen::Vector3d> boxes;        // one per frame when periodic
    bool periodic = false;
    double frame_interval_ps = 0.0;
    std::vector<StateRecord> state_log;

    std::size_t n_frames() const { return frames.size(); }
    std::size_t n_atoms() const { return topology.atoms.size(); }
};

/// Binary container, little-endian:
///   "MDCTRJ01" | u32 version | u64 N | u64 F | f64 frame interval (ps) |
///   u8 box mode (0 none, 1 orthorhombic per frame) | u64 L | L bytes of PDB
///   topology | F x (f64 time | [3 x f64 box] | 3N x f64 xyz)
void write_trajectory(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory(const std::string& path);

// CSV columns: step,PE,KE,T,V (plus time_ps).
std::string state_log_csv(const std::vector<StateRecord>& log);
std::vector<StateRecord> parse_state_log_csv(const std::string& text);

} // namespace mdcrow::sim
