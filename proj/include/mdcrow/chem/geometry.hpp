#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mdcrow::chem {

template <typename Scalar>
constexpr Scalar deg2rad(Scalar deg) {
    return deg * std::numbers::pi_v<Scalar> / Scalar(180);
}

/// Natural-extension reference frame placement: returns D with |CD| = bond,
/// angle BCD = angle, and dihedral ABCD = dihedral (degrees).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 1> place_atom(const Eigen::Matrix<Scalar, 3, 1>& a,
                                       const Eigen::Matrix<Scalar, 3, 1>& b,
                                       const Eigen::Matrix<Scalar, 3, 1>& c, Scalar bond,
                                       Scalar angle_deg, Scalar dihedral_deg) {
    using Vec = Eigen::Matrix<Scalar, 3, 1>;
    const Scalar theta = deg2rad(angle_deg);
    const Scalar phi = deg2rad(dihedral_deg);
    const Vec bc = (c - b).normalized();
    Vec n = (b - a).cross(bc);
    if (n.norm() < Scalar(1e-12)) {
        // Collinear reference: any perpendicular will do.
        n = bc.unitOrthogonal();
    }
    n.normalize();
    const Vec m = n.cross(bc);
    const Vec d2(-bond * std::cos(theta), bond * std::sin(theta) * std::cos(phi),
                 bond * std::sin(theta) * std::sin(phi));
    return c + bc * d2.x() + m * d2.y() + n * d2.z();
}

// Dihedral angle ABCD in degrees, range (-180, 180].
template <typename Scalar>
Scalar dihedral(const Eigen::Matrix<Scalar, 3, 1>& a, const Eigen::Matrix<Scalar, 3, 1>& b,
                const Eigen::Matrix<Scalar, 3, 1>& c, const Eigen::Matrix<Scalar, 3, 1>& d) {
    using Vec = Eigen::Matrix<Scalar, 3, 1>;
    const Vec b0 = a - b;
    const Vec b1 = (c - b).normalized();
    const Vec b2 = d - c;
    const Vec v = b0 - b0.dot(b1) * b1;
    const Vec w = b2 - b2.dot(b1) * b1;
    const Scalar x = v.dot(w);
    const Scalar y = b1.cross(v).dot(w);
    return std::atan2(y, x) * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
Scalar bond_angle(const Eigen::Matrix<Scalar, 3, 1>& a, const Eigen::Matrix<Scalar, 3, 1>& b,
                  const Eigen::Matrix<Scalar, 3, 1>& c) {
    const auto u = (a - b).normalized();
    const auto v = (c - b).normalized();
    return std::acos(std::clamp(u.dot(v), Scalar(-1), Scalar(1))) * Scalar(180) /
           std::numbers::pi_v<Scalar>;
}

} // namespace mdcrow::chem
