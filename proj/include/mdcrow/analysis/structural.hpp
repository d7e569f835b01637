#pragma once

#include "mdcrow/analysis/selection.hpp"
#include "mdcrow/analysis/series.hpp"
#include "mdcrow/analysis/superpose.hpp"
#include "mdcrow/sim/trajectory.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <vector>

namespace mdcrow::analysis {

template <typename Scalar>
Scalar radius_of_gyration(const Coords<Scalar>& x, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& w) {
    const Scalar total = w.sum();
    const Eigen::Matrix<Scalar, 3, 1> center = (x * w) / total;
    Scalar acc(0);
    for (Eigen::Index i = 0; i < x.cols(); ++i) acc += w(i) * (x.col(i) - center).squaredNorm();
    return std::sqrt(acc / total);
}

/// Principal moments of inertia about the center of mass, ascending.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> principal_moments(const Coords<Scalar>& x,
                                              const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& m) {
    using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
    const Eigen::Matrix<Scalar, 3, 1> com = (x * m) / m.sum();
    Mat3 inertia = Mat3::Zero();
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
        const Eigen::Matrix<Scalar, 3, 1> r = x.col(i) - com;
        inertia += m(i) * (r.squaredNorm() * Mat3::Identity() - r * r.transpose());
    }
    Eigen::SelfAdjointEigenSolver<Mat3> es(inertia, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

SeriesResult rmsd(const sim::Trajectory& traj, const Eigen::Matrix3Xd& reference,
                  const std::vector<std::size_t>& selection, bool superpose_frames);

// Per-atom fluctuation about the time-mean position.
std::vector<double> rmsf(const sim::Trajectory& traj, const std::vector<std::size_t>& selection,
                         bool superpose_to_mean_structure);

SeriesResult radius_of_gyration(const sim::Trajectory& traj, const std::vector<std::size_t>& selection,
                                bool mass_weighted);

std::array<SeriesResult, 3> moments_of_inertia(const sim::Trajectory& traj,
                                               const std::vector<std::size_t>& selection);

struct PcaResult {
    Eigen::VectorXd eigenvalues;        // descending, Å^2
    Eigen::MatrixXd components;         // k x 3N, unit rows
    Eigen::MatrixXd projections;        // F x k
    Eigen::VectorXd mean;               // 3N
    double total_variance = 0.0;
};

PcaResult pca(const sim::Trajectory& traj, const std::vector<std::size_t>& selection, int n_components);

} // namespace mdcrow::analysis
