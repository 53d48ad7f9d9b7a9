#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

namespace hardlattice {

template <typename Scalar>
using Point2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Mat2T = Eigen::Matrix<Scalar, 2, 2>;

using Point2 = Point2T<double>;
using Vec2 = Point2T<double>;
using Mat2 = Mat2T<double>;

inline constexpr double kSqrt3 = 1.7320508075688772935;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Area of the unit equilateral triangle.
inline constexpr double kUnitTriangleArea = kSqrt3 / 4.0;

}  // namespace hardlattice
