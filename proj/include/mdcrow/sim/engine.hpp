#pragma once

#include "mdcrow/common/error.hpp"
#include "mdcrow/sim/forcefield.hpp"
#include "mdcrow/sim/spec.hpp"
#include "mdcrow/sim/trajectory.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <random>

namespace mdcrow::sim {

inline constexpr double kBoltzmann = 0.0019872041;        // kcal/mol/K
inline constexpr double kAccelUnit = 418.4;               // (kcal/mol/Å/amu) -> Å/ps^2
inline constexpr double kAtmToInternal = 1.4583972e-5;    // atm -> kcal/mol/Å^3
inline constexpr int kBarostatInterval = 25;
inline constexpr int kDefaultMinimizeIterations = 200;

// Non-finite energy, force or coordinate during integration.
class InstabilityError : public Error {
public:
    using Error::Error;
};

struct EngineParams {
    Ensemble ensemble = Ensemble::NVT;
    double temperature = 300.0;  // K
    double friction = 1.0;       // 1/ps
    double timestep = 0.002;     // ps
    double pressure = 1.0;       // atm
    long long record_interval = 1;
    std::uint64_t seed = 0;
};

EngineParams engine_params(const SystemSpec& spec);

/// Stateful BAOAB Langevin integrator over a ToySystem.
///
/// Frames and state records are taken whenever the global step counter is a
/// multiple of the record interval; the first is taken when dynamics starts.
class Simulation {
public:
    Simulation(ToySystem system, chem::Structure topology, EngineParams params);

    void minimize(int max_iterations, double force_tolerance = 0.24);
    void set_temperature(double kelvin);
    void run(long long steps);

    double potential_energy() const { return potential_; }
    double kinetic_energy() const;
    double temperature() const;
    double volume() const;
    long long step_count() const { return step_; }
    const Eigen::Matrix3Xd& positions() const { return x_; }
    const Eigen::Matrix3Xd& velocities() const { return v_; }
    const ToySystem& system() const { return sys_; }

    // Trajectory so far (initial frame included even if no step was run).
    Trajectory trajectory();

    // Potential energy and forces at arbitrary coordinates.
    double evaluate(const Eigen::Matrix3Xd& x, Eigen::Matrix3Xd& forces) const;

private:
    void record();
    void barostat_move();
    void check_finite() const;

    ToySystem sys_;
    EngineParams p_;
    Trajectory traj_;
    Eigen::Matrix3Xd x_, v_, f_;
    Eigen::VectorXd inv_mass_;
    double potential_ = 0.0;
    long long step_ = 0;
    bool started_ = false;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
    double max_dv_ = 0.0;
    int baro_tries_ = 0;
    int baro_accepted_ = 0;
};

// n_steps of dynamics from the structure's coordinates, no minimization.
Trajectory integrate(const ToySystem& system, const chem::Structure& structure, const SystemSpec& spec);

} // namespace mdcrow::sim
