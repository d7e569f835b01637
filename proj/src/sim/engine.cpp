#include "mdcrow/sim/engine.hpp"

#include "mdcrow/common/strings.hpp"

#include <algorithm>
#include <cmath>

namespace mdcrow::sim {

EngineParams engine_params(const SystemSpec& spec) {
    EngineParams p;
    p.ensemble = spec.ensemble;
    p.temperature = spec.temperature;
    p.friction = spec.ensemble == Ensemble::NVE ? 0.0 : spec.friction;
    p.timestep = spec.timestep / 1000.0;
    p.pressure = spec.pressure.value_or(kDefaultPressureAtm);
    p.record_interval = spec.record_interval;
    p.seed = spec.seed;
    return p;
}

namespace {

bool excluded(const std::vector<std::size_t>& ex, std::size_t j) {
    return !ex.empty() && std::binary_search(ex.begin(), ex.end(), j);
}

template <typename Fn>
void for_each_pair(const ToySystem& sys, const Eigen::Matrix3Xd& x, Fn&& fn) {
    const Eigen::Index n = x.cols();
    const double rc = sys.cutoff;
    if (n < 2) return;

    Eigen::Vector3d box = Eigen::Vector3d::Zero();
    const bool periodic = sys.box.has_value();
    auto delta = [&](Eigen::Index i, Eigen::Index j) {
        Eigen::Vector3d d = x.col(i) - x.col(j);
        if (periodic)
            for (int k = 0; k < 3; ++k) d[k] -= box[k] * std::round(d[k] / box[k]);
        return d;
    };

    Eigen::Vector3d lo;
    Eigen::Vector3i nc;
    if (periodic) {
        box = *sys.box;
        if (2.0 * rc > box.minCoeff() + 1e-9)
            throw UsageError("nonbonded cutoff " + format_number(rc) + " Å exceeds half the box edge (" +
                             format_number(box.minCoeff()) + " Å); use a smaller cutoff or a larger box");
        lo.setZero();
        for (int k = 0; k < 3; ++k) nc[k] = static_cast<int>(std::floor(box[k] / rc));
    } else {
        lo = x.rowwise().minCoeff();
        Eigen::Vector3d hi = x.rowwise().maxCoeff();
        if (!lo.allFinite() || !hi.allFinite()) throw InstabilityError("non-finite coordinates");
        for (int k = 0; k < 3; ++k) nc[k] = static_cast<int>(std::floor((hi[k] - lo[k]) / rc)) + 1;
    }

    if (periodic && nc.minCoeff() < 3) {
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) fn(i, j, delta(i, j));
        return;
    }

    const long long total = static_cast<long long>(nc[0]) * nc[1] * nc[2];
    if (total > 50'000'000) throw InstabilityError("system exploded: coordinates span too large a region");
    std::vector<Eigen::Index> head(static_cast<std::size_t>(total), -1), next(static_cast<std::size_t>(n), -1);
    std::vector<Eigen::Vector3i> cell(static_cast<std::size_t>(n));
    auto flat = [&](const Eigen::Vector3i& c) {
        return (static_cast<long long>(c[0]) * nc[1] + c[1]) * nc[2] + c[2];
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Vector3i c;
        for (int k = 0; k < 3; ++k) {
            double u = x(k, i) - lo[k];
            if (periodic) u -= box[k] * std::floor(u / box[k]);
            c[k] = std::clamp(static_cast<int>(u / (periodic ? box[k] / nc[k] : rc)), 0, nc[k] - 1);
        }
        cell[i] = c;
        auto f = flat(c);
        next[i] = head[f];
        head[f] = i;
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& c = cell[i];
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dz = -1; dz <= 1; ++dz) {
                    Eigen::Vector3i o = c + Eigen::Vector3i(dx, dy, dz);
                    bool skip = false;
                    for (int k = 0; k < 3; ++k) {
                        if (periodic)
                            o[k] = (o[k] + nc[k]) % nc[k];
                        else if (o[k] < 0 || o[k] >= nc[k])
                            skip = true;
                    }
                    if (skip) continue;
                    for (Eigen::Index j = head[flat(o)]; j >= 0; j = next[j])
                        if (j > i) fn(i, j, delta(i, j));
                }
    }
}

} // namespace

Simulation::Simulation(ToySystem system, chem::Structure topology, EngineParams params)
    : sys_(std::move(system)), p_(params), rng_(params.seed) {
    const auto n = static_cast<Eigen::Index>(sys_.size());
    if (static_cast<std::size_t>(n) != topology.size())
        throw UsageError("system has " + std::to_string(n) + " particles but the structure has " +
                         std::to_string(topology.size()) + " atoms");
    if (n == 0) throw UsageError("cannot simulate an empty system");
    if (p_.ensemble == Ensemble::NPT && !sys_.box)
        throw UsageError("NPT needs a periodic box; solvate the structure first (e.g. solvent=water padding=10)");
    if (!(p_.timestep > 0)) throw UsageError("timestep must be positive");
    if (p_.record_interval < 1) throw UsageError("record_interval must be >= 1");

    x_ = topology.coordinates();
    inv_mass_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(sys_.mass[i] > 0)) throw UsageError("particle masses must be positive");
        inv_mass_[i] = 1.0 / sys_.mass[i];
    }

    v_.resize(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double s = std::sqrt(kBoltzmann * p_.temperature * kAccelUnit * inv_mass_[i]);
        for (int k = 0; k < 3; ++k) v_(k, i) = s * gauss_(rng_);
    }
    f_.resize(3, n);
    potential_ = evaluate(x_, f_);
    if (!std::isfinite(potential_))
        throw InstabilityError("initial potential energy is not finite (overlapping atoms?)");

    traj_.topology = std::move(topology);
    traj_.periodic = sys_.box.has_value();
    traj_.frame_interval_ps = p_.record_interval * p_.timestep;
    if (sys_.box) traj_.topology.box = sys_.box;
    max_dv_ = sys_.box ? 0.01 * volume() : 0.0;
}

double Simulation::evaluate(const Eigen::Matrix3Xd& x, Eigen::Matrix3Xd& f) const {
    f.setZero(3, x.cols());
    double e = 0.0;

    for (const auto& b : sys_.bonds) {
        Eigen::Vector3d d = x.col(b.i) - x.col(b.j);
        const double r = d.norm();
        const double dr = r - b.r0;
        e += 0.5 * b.k * dr * dr;
        if (r > 0) {
            Eigen::Vector3d g = (b.k * dr / r) * d;
            f.col(b.i) -= g;
            f.col(b.j) += g;
        }
    }
    for (const auto& a : sys_.angles) {
        Eigen::Vector3d u = x.col(a.i) - x.col(a.j), w = x.col(a.l) - x.col(a.j);
        const double ru = u.norm(), rw = w.norm();
        if (ru == 0 || rw == 0) continue;
        u /= ru;
        w /= rw;
        const double c = std::clamp(u.dot(w), -1.0, 1.0);
        const double th = std::acos(c);
        const double s = std::sqrt(std::max(0.0, 1 - c * c));
        const double dth = th - a.theta0;
        e += 0.5 * a.k * dth * dth;
        if (s < 1e-8) continue;
        const double de = a.k * dth / s;
        Eigen::Vector3d fa = de * (w - c * u) / ru;
        Eigen::Vector3d fc = de * (u - c * w) / rw;
        f.col(a.i) += fa;
        f.col(a.l) += fc;
        f.col(a.j) -= fa + fc;
    }
    for (const auto& r : sys_.restraints) {
        Eigen::Vector3d d = x.col(r.atom) - r.center;
        e += 0.5 * r.k * d.squaredNorm();
        f.col(r.atom) -= r.k * d;
    }

    if (sys_.nonbonded) {
        const double rc2 = sys_.cutoff * sys_.cutoff;
        for_each_pair(sys_, x, [&](Eigen::Index i, Eigen::Index j, const Eigen::Vector3d& d) {
            const double r2 = d.squaredNorm();
            if (r2 >= rc2) return;
            if (excluded(sys_.exclusions[i], static_cast<std::size_t>(j))) return;
            const double eps = std::sqrt(sys_.epsilon[i] * sys_.epsilon[j]);
            if (eps == 0) return;
            const double sig = 0.5 * (sys_.sigma[i] + sys_.sigma[j]);
            const double sig2 = sig * sig;
            const double s6 = sig2 * sig2 * sig2 / (r2 * r2 * r2);
            const double c6 = sig2 * sig2 * sig2 / (rc2 * rc2 * rc2);
            e += 4 * eps * (s6 * s6 - s6) - 4 * eps * (c6 * c6 - c6);
            Eigen::Vector3d g = (4 * eps * (12 * s6 * s6 - 6 * s6) / r2) * d;
            f.col(i) += g;
            f.col(j) -= g;
        });
    }
    return e;
}

double Simulation::kinetic_energy() const {
    double ke = 0;
    for (Eigen::Index i = 0; i < v_.cols(); ++i) ke += sys_.mass[i] * v_.col(i).squaredNorm();
    return 0.5 * ke / kAccelUnit;
}

double Simulation::temperature() const {
    return 2.0 * kinetic_energy() / (3.0 * static_cast<double>(v_.cols()) * kBoltzmann);
}

double Simulation::volume() const { return sys_.box ? sys_.box->prod() : 0.0; }

void Simulation::set_temperature(double kelvin) {
    if (!(kelvin >= 0) || !std::isfinite(kelvin)) throw UsageError("temperature must be >= 0 K");
    p_.temperature = kelvin;
}

void Simulation::minimize(int max_iterations, double force_tolerance) {
    Eigen::Matrix3Xd f = f_, trial, ft;
    double e = potential_;
    double h = 0.01;
    for (int it = 0; it < max_iterations; ++it) {
        const double fmax = f.colwise().norm().maxCoeff();
        if (!std::isfinite(fmax)) throw InstabilityError("non-finite force during minimization");
        if (fmax < force_tolerance) break;
        trial = x_ + (h / fmax) * f;
        const double et = evaluate(trial, ft);
        if (std::isfinite(et) && et < e) {
            x_ = trial;
            f = ft;
            e = et;
            h = std::min(h * 1.2, 0.2);
        } else {
            h *= 0.5;
            if (h < 1e-8) break;
        }
    }
    potential_ = e;
    f_ = f;
}

void Simulation::record() {
    traj_.frames.push_back(x_);
    traj_.times.push_back(static_cast<double>(step_) * p_.timestep);
    if (sys_.box) traj_.boxes.push_back(*sys_.box);
    traj_.state_log.push_back({step_, static_cast<double>(step_) * p_.timestep, potential_, kinetic_energy(),
                               temperature(), volume()});
}

void Simulation::check_finite() const {
    if (!std::isfinite(potential_) || !std::isfinite(kinetic_energy()))
        throw InstabilityError("simulation unstable: non-finite energy at step " + std::to_string(step_));
}

void Simulation::run(long long steps) {
    if (steps < 0) throw UsageError("step count must be >= 0");
    if (!started_) {
        record();
        started_ = true;
    }
    const double dt = p_.timestep;
    const bool thermostat = p_.ensemble != Ensemble::NVE && p_.friction > 0;
    const double c1 = std::exp(-p_.friction * dt);
    const double c2 = std::sqrt(std::max(0.0, 1.0 - c1 * c1));
    const Eigen::Index n = x_.cols();

    for (long long s = 0; s < steps; ++s) {
        for (Eigen::Index i = 0; i < n; ++i) v_.col(i) += (0.5 * dt * kAccelUnit * inv_mass_[i]) * f_.col(i);
        x_ += (0.5 * dt) * v_;
        if (thermostat) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double sd = c2 * std::sqrt(kBoltzmann * p_.temperature * kAccelUnit * inv_mass_[i]);
                for (int k = 0; k < 3; ++k) v_(k, i) = c1 * v_(k, i) + sd * gauss_(rng_);
            }
        }
        x_ += (0.5 * dt) * v_;
        potential_ = evaluate(x_, f_);
        for (Eigen::Index i = 0; i < n; ++i) v_.col(i) += (0.5 * dt * kAccelUnit * inv_mass_[i]) * f_.col(i);
        ++step_;
        check_finite();
        if (p_.ensemble == Ensemble::NPT && step_ % kBarostatInterval == 0) barostat_move();
        if (step_ % p_.record_interval == 0) record();
    }
}

void Simulation::barostat_move() {
    const double v0 = volume();
    std::uniform_real_distribution<double> uni(-1.0, 1.0), u01(0.0, 1.0);
    const double dv = max_dv_ * uni(rng_);
    const double v1 = v0 + dv;
    ++baro_tries_;
    auto adapt = [&] {
        if (baro_tries_ < 10) return;
        const double rate = static_cast<double>(baro_accepted_) / baro_tries_;
        if (rate < 0.25)
            max_dv_ *= 0.9;
        else if (rate > 0.75)
            max_dv_ = std::min(max_dv_ * 1.1, 0.3 * v0);
        baro_tries_ = baro_accepted_ = 0;
    };
    if (v1 <= 0) {
        adapt();
        return;
    }
    const double scale = std::cbrt(v1 / v0);
    const Eigen::Vector3d old_box = *sys_.box;
    if (2.0 * sys_.cutoff > (old_box * scale).minCoeff()) {
        adapt();
        return;
    }

    // scale molecule centers of mass
    const int nm = sys_.n_molecules;
    Eigen::Matrix3Xd com = Eigen::Matrix3Xd::Zero(3, nm);
    Eigen::VectorXd mtot = Eigen::VectorXd::Zero(nm);
    for (Eigen::Index i = 0; i < x_.cols(); ++i) {
        com.col(sys_.molecule[i]) += sys_.mass[i] * x_.col(i);
        mtot[sys_.molecule[i]] += sys_.mass[i];
    }
    for (int m = 0; m < nm; ++m) com.col(m) /= mtot[m];
    Eigen::Matrix3Xd trial = x_;
    for (Eigen::Index i = 0; i < x_.cols(); ++i) trial.col(i) += (scale - 1.0) * com.col(sys_.molecule[i]);

    sys_.box = old_box * scale;
    Eigen::Matrix3Xd ft;
    const double e1 = evaluate(trial, ft);
    const double kt = kBoltzmann * std::max(p_.temperature, 1e-6);
    const double w = (e1 - potential_) + p_.pressure * kAtmToInternal * dv - nm * kt * std::log(v1 / v0);
    if (std::isfinite(e1) && (w <= 0 || u01(rng_) < std::exp(-w / kt))) {
        x_ = trial;
        f_ = ft;
        potential_ = e1;
        ++baro_accepted_;
    } else {
        sys_.box = old_box;
    }
    adapt();
}

Trajectory Simulation::trajectory() {
    if (!started_) {
        record();
        started_ = true;
    }
    return traj_;
}

Trajectory integrate(const ToySystem& system, const chem::Structure& structure, const SystemSpec& spec) {
    Simulation sim(system, structure, engine_params(spec));
    sim.run(spec.n_steps);
    return sim.trajectory();
}

} // namespace mdcrow::sim
