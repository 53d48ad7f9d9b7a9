#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hardlattice/types.hpp"

namespace hardlattice {

template <typename Scalar>
Mat2T<Scalar> rotation(Scalar theta) {
  using std::cos;
  using std::sin;
  Mat2T<Scalar> r;
  r << cos(theta), -sin(theta), sin(theta), cos(theta);
  return r;
}

// Angle of the rotation R(theta) maximizing tr(R^T M) over SO(2), i.e. the
// rotation factor of the polar decomposition when det M > 0.
template <typename Derived>
typename Derived::Scalar polar_rotation(const Eigen::MatrixBase<Derived>& m) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 2, 2);
  using Scalar = typename Derived::Scalar;
  const Scalar c = m(0, 0) + m(1, 1);
  const Scalar s = m(1, 0) - m(0, 1);
  if (c == Scalar(0) && s == Scalar(0)) {
    throw std::domain_error("polar_rotation: tr(R^T M) is constant in R, no unique rotation");
  }
  using std::atan2;
  return atan2(s, c);
}

// Distance to SO(2) in the Frobenius norm. Since max_R tr(R^T M) equals
// sqrt((m11+m22)^2 + (m21-m12)^2) = sqrt(|M|^2 + 2 det M), the squared
// distance is |M|^2 + 2 - 2 sqrt(|M|^2 + 2 det M).
template <typename Derived>
typename Derived::Scalar dist_so2_squared(const Eigen::MatrixBase<Derived>& m) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 2, 2);
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  const Scalar c = m(0, 0) + m(1, 1);
  const Scalar s = m(1, 0) - m(0, 1);
  const Scalar sum_singular = sqrt(c * c + s * s);
  const Scalar d2 = m.squaredNorm() + Scalar(2) - Scalar(2) * sum_singular;
  return d2 < Scalar(0) ? Scalar(0) : d2;
}

template <typename Derived>
typename Derived::Scalar dist_so2(const Eigen::MatrixBase<Derived>& m) {
  using std::sqrt;
  return sqrt(dist_so2_squared(m));
}

// Grid minimum of |M - R(2 pi k / n_grid)|, an independent check of dist_so2.
template <typename Derived>
typename Derived::Scalar dist_so2_bruteforce(const Eigen::MatrixBase<Derived>& m, int n_grid) {
  EIGEN_STATIC_ASSERT_MATRIX_SPECIFIC_SIZE(Derived, 2, 2);
  using Scalar = typename Derived::Scalar;
  if (n_grid < 8) throw std::invalid_argument("dist_so2_bruteforce: n_grid must be at least 8");
  Scalar best = std::numeric_limits<Scalar>::infinity();
  const Mat2T<Scalar> mm = m;
  for (int k = 0; k < n_grid; ++k) {
    const Scalar theta = Scalar(2 * kPi) * Scalar(k) / Scalar(n_grid);
    best = std::min(best, (mm - rotation(theta)).norm());
  }
  return best;
}

template <typename Scalar>
Scalar heron_area(Scalar a1, Scalar a2, Scalar a3) {
  const Scalar radicand = (a1 + a2 + a3) * (-a1 + a2 + a3) * (a1 - a2 + a3) * (a1 + a2 - a3);
  if (!(radicand > Scalar(0)) || !(a1 > 0) || !(a2 > 0) || !(a3 > 0)) {
    throw std::domain_error("heron_area: side lengths violate the strict triangle inequality");
  }
  using std::sqrt;
  return sqrt(radicand) / Scalar(4);
}

template <typename D1, typename D2>
typename D1::Scalar cross2(const Eigen::MatrixBase<D1>& a, const Eigen::MatrixBase<D2>& b) {
  return a(0) * b(1) - a(1) * b(0);
}

// Half the planar cross product; positive iff p1, p2, p3 is counterclockwise.
template <typename D1, typename D2, typename D3>
typename D1::Scalar signed_area(const Eigen::MatrixBase<D1>& p1, const Eigen::MatrixBase<D2>& p2,
                                const Eigen::MatrixBase<D3>& p3) {
  return cross2(p2 - p1, p3 - p1) / typename D1::Scalar(2);
}

// Counterclockwise angle from a to b in (-pi, pi].
template <typename D1, typename D2>
typename D1::Scalar turning_angle(const Eigen::MatrixBase<D1>& a, const Eigen::MatrixBase<D2>& b) {
  using std::atan2;
  return atan2(cross2(a, b), a.dot(b));
}

}  // namespace hardlattice
