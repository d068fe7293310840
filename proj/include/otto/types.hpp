#pragma once

#include <Eigen/Dense>

namespace otto {

// Observable space is (E, L, C, D, 1); propagators act on column vectors
// from the left, so a segment sequence U1 then U2 composes as U2 * U1.
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;
using Mat4 = Eigen::Matrix<double, 4, 4>;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat3 = Eigen::Matrix3d;
using CMat4 = Eigen::Matrix4cd;

}  // namespace otto
