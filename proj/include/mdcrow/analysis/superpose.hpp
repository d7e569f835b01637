#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace mdcrow::analysis {

template <typename Scalar>
using Coords = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> centroid(const Coords<Scalar>& x) {
    return x.rowwise().mean();
}

/// Proper rotation R minimizing |R*mobile - target| for centered inputs.
/// A reflection is avoided by flipping the sign of the smallest singular
/// direction.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> kabsch_rotation(const Coords<Scalar>& mobile_centered,
                                            const Coords<Scalar>& target_centered) {
    using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
    const Mat3 h = mobile_centered * target_centered.transpose();
    Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 d = Mat3::Identity();
    if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < Scalar(0)) d(2, 2) = Scalar(-1);
    return svd.matrixV() * d * svd.matrixU().transpose();
}

// Mobile rigidly moved onto target (least squares, equal weights).
template <typename Scalar>
Coords<Scalar> superpose(const Coords<Scalar>& mobile, const Coords<Scalar>& target) {
    const auto cm = centroid(mobile);
    const auto ct = centroid(target);
    const Coords<Scalar> m = mobile.colwise() - cm;
    const Coords<Scalar> t = target.colwise() - ct;
    return (kabsch_rotation<Scalar>(m, t) * m).colwise() + ct;
}

template <typename Scalar>
Scalar rmsd_plain(const Coords<Scalar>& a, const Coords<Scalar>& b) {
    if (a.cols() == 0) return Scalar(0);
    return std::sqrt((a - b).squaredNorm() / static_cast<Scalar>(a.cols()));
}

template <typename Scalar>
Coords<Scalar> gather(const Coords<Scalar>& x, const std::vector<std::size_t>& idx) {
    Coords<Scalar> out(3, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        out.col(static_cast<Eigen::Index>(i)) = x.col(static_cast<Eigen::Index>(idx[i]));
    return out;
}

// Iteratively aligns every frame to the running mean structure.
std::vector<Eigen::Matrix3Xd> superpose_to_mean(const std::vector<Eigen::Matrix3Xd>& frames,
                                                int max_iterations = 20);

} // namespace mdcrow::analysis
