#pragma once

#include <optional>
#include <vector>

#include "hardlattice/configuration.hpp"

namespace hardlattice {

// Squared Frobenius distance |grad(tri) - target|^2.
double order_parameter(const Configuration& cfg, const TriangleRef& tri, const Mat2& target);

// position(x + z) - position(x) for a neighbour offset z.
Vec2 bond_vector(const Configuration& cfg, LatticeIndex x, LatticeIndex z);

// Sum over the 3N^2 undirected bond classes of (length - 1)^2.
double side_deviation_sum(const Configuration& cfg);

// Squared L2(U_N) norm of grad - target; the gradient is constant on each
// triangle of area sqrt(3)/4, so the integral is an exact weighted sum.
double l2_gradient_deviation(const Configuration& cfg, const Mat2& target);

// Squared L2(U_N) norm of dist(grad, SO(2)).
double l2_dist_so2(const Configuration& cfg);

// Sum over triangle classes of (signed image area - sqrt(3)/4).
double area_difference_sum(const Configuration& cfg);

// Closed form 2N^2 (sqrt(3)/4)(l^2 - 1) that area_difference_sum attains on
// every periodic configuration with injective extension.
double area_difference_closed_form(int n, double l);

// Area-weighted mean of the triangle gradients; l Id for every periodic configuration.
Mat2 mean_gradient(const Configuration& cfg);

struct RigidityEstimate {
  double angle = 0.0;        // polar rotation of the mean gradient
  double numerator = 0.0;    // ||grad - R||_{L2}
  double denominator = 0.0;  // ||dist(grad, SO(2))||_{L2}
  std::optional<double> ratio;  // empty when the denominator vanishes
};

// Lower bound for the rigidity constant of U_N from a single configuration.
RigidityEstimate best_rotation_and_ratio(const Configuration& cfg);

struct ObservationRecord {
  std::vector<double> op_id;   // |grad - Id|^2 per triangle class
  std::vector<double> op_lid;  // |grad - l Id|^2 per triangle class
  std::vector<Vec2> bond_vectors;  // forward bonds, in the order of bonds(N)
  double side_deviation_sum = 0.0;
  double area_difference_sum = 0.0;
  double l2_gradient_deviation = 0.0;  // against l Id
  std::optional<double> rigidity_ratio;
};

ObservationRecord observe(const Configuration& cfg);

// Exact identities every periodic configuration satisfies.
struct IdentityReport {
  double mean_gradient_error = 0.0;   // |mean_gradient - l Id|
  double area_relative_error = 0.0;   // vs the closed form
  double pythagoras_relative_error = 0.0;
  bool mean_gradient_ok = false;
  bool area_ok = false;
  bool pythagoras_ok = false;

  bool ok() const { return mean_gradient_ok && area_ok && pythagoras_ok; }
};

inline constexpr double kMeanGradientTolerance = 1e-10;
inline constexpr double kAreaIdentityTolerance = 1e-9;
inline constexpr double kPythagorasTolerance = 1e-9;

IdentityReport check_identities(const Configuration& cfg);

}  // namespace hardlattice
