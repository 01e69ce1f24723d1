#pragma once

#include <Eigen/Dense>

namespace emsep {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Inverse of a 3x3 matrix through its adjugate. Throws SingularityError when
/// |det| <= det_guard * ||m||_F^3.
Mat3 inverse3(const Mat3& m, double det_guard = 1e-12);

/// Axial vector b of the skew part of m, i.e. skew(m) v = b x v.
Vec3 axial(const Mat3& m);

bool all_finite(const Vec3& v);

}  // namespace emsep
