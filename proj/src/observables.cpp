#include "hardlattice/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "hardlattice/geometry.hpp"

namespace hardlattice {

double order_parameter(const Configuration& cfg, const TriangleRef& tri, const Mat2& target) {
  return (triangle_gradient(cfg, tri) - target).squaredNorm();
}

Vec2 bond_vector(const Configuration& cfg, LatticeIndex x, LatticeIndex z) {
  if (!is_neighbor_offset(z)) throw std::invalid_argument("bond_vector: z is not a neighbour offset");
  return cfg.position(x + z) - cfg.position(x);
}

double side_deviation_sum(const Configuration& cfg) {
  double sum = 0.0;
  for (const Bond& b : bonds(cfg.n())) {
    const double d = (cfg.position(b.b) - cfg.position(b.a)).norm() - 1.0;
    sum += d * d;
  }
  return sum;
}

double l2_gradient_deviation(const Configuration& cfg, const Mat2& target) {
  double sum = 0.0;
  for (const TriangleRef& t : triangles(cfg.n())) sum += order_parameter(cfg, t, target);
  return kUnitTriangleArea * sum;
}

double l2_dist_so2(const Configuration& cfg) {
  double sum = 0.0;
  for (const TriangleRef& t : triangles(cfg.n())) sum += dist_so2_squared(triangle_gradient(cfg, t));
  return kUnitTriangleArea * sum;
}

double area_difference_sum(const Configuration& cfg) {
  double sum = 0.0;
  for (const TriangleRef& t : triangles(cfg.n())) {
    const auto p = image_corners(cfg, t);
    sum += signed_area(p[0], p[1], p[2]) - kUnitTriangleArea;
  }
  return sum;
}

double area_difference_closed_form(int n, double l) {
  return 2.0 * n * n * kUnitTriangleArea * (l * l - 1.0);
}

Mat2 mean_gradient(const Configuration& cfg) {
  Mat2 sum = Mat2::Zero();
  const auto ts = triangles(cfg.n());
  for (const TriangleRef& t : ts) sum += triangle_gradient(cfg, t);
  return sum / static_cast<double>(ts.size());
}

RigidityEstimate best_rotation_and_ratio(const Configuration& cfg) {
  RigidityEstimate est;
  est.angle = polar_rotation(mean_gradient(cfg));
  est.numerator = std::sqrt(l2_gradient_deviation(cfg, rotation(est.angle)));
  est.denominator = std::sqrt(l2_dist_so2(cfg));
  if (est.denominator > 0.0) est.ratio = est.numerator / est.denominator;
  return est;
}

ObservationRecord observe(const Configuration& cfg) {
  ObservationRecord rec;
  const Mat2 id = Mat2::Identity();
  const Mat2 lid = cfg.l() * id;
  const auto ts = triangles(cfg.n());
  rec.op_id.reserve(ts.size());
  rec.op_lid.reserve(ts.size());
  for (const TriangleRef& t : ts) {
    const Mat2 g = triangle_gradient(cfg, t);
    rec.op_id.push_back((g - id).squaredNorm());
    rec.op_lid.push_back((g - lid).squaredNorm());
    rec.l2_gradient_deviation += rec.op_lid.back();
  }
  rec.l2_gradient_deviation *= kUnitTriangleArea;
  for (const Bond& b : bonds(cfg.n())) {
    const Vec2 d = cfg.position(b.b) - cfg.position(b.a);
    rec.bond_vectors.push_back(d);
    const double dev = d.norm() - 1.0;
    rec.side_deviation_sum += dev * dev;
  }
  rec.area_difference_sum = area_difference_sum(cfg);
  rec.rigidity_ratio = best_rotation_and_ratio(cfg).ratio;
  return rec;
}

IdentityReport check_identities(const Configuration& cfg) {
  IdentityReport r;
  const Mat2 lid = cfg.l() * Mat2::Identity();
  r.mean_gradient_error = (mean_gradient(cfg) - lid).norm();
  r.mean_gradient_ok = r.mean_gradient_error <= kMeanGradientTolerance;

  const double expected = area_difference_closed_form(cfg.n(), cfg.l());
  r.area_relative_error = std::abs(area_difference_sum(cfg) - expected) / std::abs(expected);
  r.area_ok = r.area_relative_error <= kAreaIdentityTolerance;

  // ||grad - R||^2 = ||grad - l Id||^2 + ||l Id - R||^2 for the polar best rotation R.
  const Mat2 rot = rotation(polar_rotation(mean_gradient(cfg)));
  const double total = l2_gradient_deviation(cfg, rot);
  const double fluct = l2_gradient_deviation(cfg, lid);
  const double area_un = 2.0 * cfg.n() * cfg.n() * kUnitTriangleArea;
  const double offset = area_un * (lid - rot).squaredNorm();
  r.pythagoras_relative_error = std::abs(total - fluct - offset) / total;
  r.pythagoras_ok = r.pythagoras_relative_error <= kPythagorasTolerance;
  return r;
}

}  // namespace hardlattice
