#include "mdcrow/analysis/structural.hpp"

#include "mdcrow/chem/elements.hpp"
#include "mdcrow/common/error.hpp"

#include <algorithm>
#include <numeric>

namespace mdcrow::analysis {

namespace {

std::vector<Eigen::Matrix3Xd> selected_frames(const sim::Trajectory& traj,
                                              const std::vector<std::size_t>& selection) {
    if (selection.empty()) throw UsageError("empty atom selection");
    for (auto i : selection)
        if (i >= traj.n_atoms()) throw UsageError("selection index out of range");
    std::vector<Eigen::Matrix3Xd> out;
    out.reserve(traj.n_frames());
    for (const auto& f : traj.frames) out.push_back(gather<double>(f, selection));
    return out;
}

Eigen::VectorXd selected_masses(const sim::Trajectory& traj, const std::vector<std::size_t>& selection) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(selection.size()));
    for (size_t i = 0; i < selection.size(); ++i)
        m(static_cast<Eigen::Index>(i)) = chem::element_mass(traj.topology.atoms[selection[i]].element);
    return m;
}

} // namespace

SeriesResult rmsd(const sim::Trajectory& traj, const Eigen::Matrix3Xd& reference,
                  const std::vector<std::size_t>& selection, bool superpose_frames) {
    if (selection.empty()) throw UsageError("empty atom selection");
    if (static_cast<std::size_t>(reference.cols()) != selection.size())
        throw UsageError("reference has " + std::to_string(reference.cols()) + " atoms but selection has " +
                         std::to_string(selection.size()));
    SeriesResult out;
    out.label = "RMSD";
    out.y_units = "Angstrom";
    const auto frames = selected_frames(traj, selection);
    for (size_t f = 0; f < frames.size(); ++f) {
        const Eigen::Matrix3Xd mobile = superpose_frames ? superpose<double>(frames[f], reference) : frames[f];
        out.x.push_back(traj.times[f]);
        out.y.push_back(rmsd_plain<double>(mobile, reference));
    }
    return out;
}

std::vector<double> rmsf(const sim::Trajectory& traj, const std::vector<std::size_t>& selection,
                         bool superpose_to_mean_structure) {
    if (traj.n_frames() < 2) throw UsageError("RMSF needs at least 2 frames, trajectory has " +
                                              std::to_string(traj.n_frames()));
    auto frames = selected_frames(traj, selection);
    if (superpose_to_mean_structure) frames = superpose_to_mean(frames);
    Eigen::Matrix3Xd mean = Eigen::Matrix3Xd::Zero(3, frames.front().cols());
    for (const auto& f : frames) mean += f;
    mean /= static_cast<double>(frames.size());
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(mean.cols());
    for (const auto& f : frames) acc += (f - mean).colwise().squaredNorm().transpose();
    acc /= static_cast<double>(frames.size());
    std::vector<double> out(static_cast<size_t>(acc.size()));
    for (Eigen::Index i = 0; i < acc.size(); ++i) out[static_cast<size_t>(i)] = std::sqrt(acc(i));
    return out;
}

SeriesResult radius_of_gyration(const sim::Trajectory& traj, const std::vector<std::size_t>& selection,
                                bool mass_weighted) {
    const auto frames = selected_frames(traj, selection);
    const Eigen::VectorXd w = mass_weighted ? selected_masses(traj, selection)
                                            : Eigen::VectorXd::Ones(static_cast<Eigen::Index>(selection.size()));
    SeriesResult out;
    out.label = "Radius of gyration";
    out.y_units = "Angstrom";
    for (size_t f = 0; f < frames.size(); ++f) {
        out.x.push_back(traj.times[f]);
        out.y.push_back(radius_of_gyration<double>(frames[f], w));
    }
    return out;
}

std::array<SeriesResult, 3> moments_of_inertia(const sim::Trajectory& traj,
                                               const std::vector<std::size_t>& selection) {
    const auto frames = selected_frames(traj, selection);
    const Eigen::VectorXd m = selected_masses(traj, selection);
    std::array<SeriesResult, 3> out;
    for (int k = 0; k < 3; ++k) {
        out[k].label = "I" + std::to_string(k + 1);
        out[k].y_units = "amu*Angstrom^2";
    }
    for (size_t f = 0; f < frames.size(); ++f) {
        const Eigen::Vector3d p = principal_moments<double>(frames[f], m);
        for (int k = 0; k < 3; ++k) {
            out[k].x.push_back(traj.times[f]);
            out[k].y.push_back(p(k));
        }
    }
    return out;
}

PcaResult pca(const sim::Trajectory& traj, const std::vector<std::size_t>& selection, int n_components) {
    if (traj.n_frames() < 2)
        throw UsageError("PCA needs at least 2 frames, trajectory has " + std::to_string(traj.n_frames()));
    const auto aligned = superpose_to_mean(selected_frames(traj, selection));
    const auto n_frames = static_cast<Eigen::Index>(aligned.size());
    const Eigen::Index dim = 3 * aligned.front().cols();

    Eigen::MatrixXd x(n_frames, dim);
    for (Eigen::Index f = 0; f < n_frames; ++f)
        x.row(f) = Eigen::Map<const Eigen::RowVectorXd>(aligned[static_cast<size_t>(f)].data(), dim);
    PcaResult out;
    out.mean = x.colwise().mean().transpose();
    x.rowwise() -= out.mean.transpose();
    out.total_variance = x.squaredNorm() / static_cast<double>(n_frames);

    const int k = std::clamp<int>(n_components, 1, static_cast<int>(std::min<Eigen::Index>(dim, n_frames)));
    Eigen::VectorXd evals = Eigen::VectorXd::Zero(dim);
    Eigen::MatrixXd comps(k, dim);

    if (dim <= n_frames || dim <= 900) {
        const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n_frames);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
        for (Eigen::Index i = 0; i < dim; ++i) evals(i) = std::max(0.0, es.eigenvalues()(dim - 1 - i));
        for (int c = 0; c < k; ++c) comps.row(c) = es.eigenvectors().col(dim - 1 - c).transpose();
    } else {
        // Few frames, many coordinates: diagonalize the F x F Gram matrix.
        const Eigen::MatrixXd gram = (x * x.transpose()) / static_cast<double>(n_frames);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
        for (Eigen::Index i = 0; i < n_frames; ++i) evals(i) = std::max(0.0, es.eigenvalues()(n_frames - 1 - i));
        for (int c = 0; c < k; ++c) {
            Eigen::VectorXd v = x.transpose() * es.eigenvectors().col(n_frames - 1 - c);
            const double norm = v.norm();
            if (norm > 0)
                comps.row(c) = (v / norm).transpose();
            else
                comps.row(c).setZero();
        }
    }
    for (int c = 0; c < k; ++c) {
        Eigen::Index arg = 0;
        comps.row(c).cwiseAbs().maxCoeff(&arg);
        if (comps(c, arg) < 0) comps.row(c) *= -1.0;
    }
    out.eigenvalues = evals;
    out.components = comps;
    out.projections = x * comps.transpose();
    return out;
}

} // namespace mdcrow::analysis
