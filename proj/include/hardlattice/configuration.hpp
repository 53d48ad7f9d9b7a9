#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "hardlattice/lattice.hpp"
#include "hardlattice/predicates.hpp"
#include "hardlattice/types.hpp"

namespace hardlattice {

// An N-periodic configuration: positions of the N^2 canonical sites (row-major,
// see site_index), extended to the whole lattice by
//   position(x + N y) = position(x) + l N embed(y).
// Site (0,0) is pinned at the origin.
class Configuration {
 public:
  Configuration(int n, double l, double epsilon, std::vector<Point2> positions);

  int n() const { return n_; }
  double l() const { return l_; }
  double epsilon() const { return epsilon_; }
  std::size_t num_sites() const { return positions_.size(); }
  const std::vector<Point2>& positions() const { return positions_; }
  const Point2& at(LatticeIndex canonical_idx) const { return positions_[site_index(canonical_idx, n_)]; }

  // Periodic extension to an arbitrary lattice index.
  Point2 position(LatticeIndex idx) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.n_ == b.n_ && a.l_ == b.l_ && a.epsilon_ == b.epsilon_ && a.positions_ == b.positions_;
  }

 private:
  int n_;
  double l_;
  double epsilon_;
  std::vector<Point2> positions_;
};

// Translation l N embed(y) by which the image of x + N y is shifted.
inline Vec2 periodic_shift(LatticeIndex y, double l, int n) { return (l * n) * embed(y); }

// Splits idx into canonical site and period: idx = site + N * period.
inline LatticeIndex period_of(LatticeIndex idx, LatticeIndex site, int n) {
  const LatticeIndex d = idx - site;
  return {d.u / n, d.v / n};
}

void validate_parameters(int n, double l, double epsilon);

// The scaled standard configuration x -> l x. Requires N >= 2 and 1 < l < 1 + epsilon <= 2.
Configuration standard_config(int n, double l, double epsilon);

inline Point2 position(const Configuration& cfg, LatticeIndex idx) { return cfg.position(idx); }

// Constant Jacobian of the piecewise-affine extension on a triangle: the A with
// A embed(z) = d1 and A embed(tau z) = d2 for the image edge vectors d1, d2.
Mat2 triangle_gradient(const Configuration& cfg, const TriangleRef& tri);
Mat2 gradient_from_edges(Orientation orientation, const Vec2& d1, const Vec2& d2);

TriangleCorners image_corners(const Configuration& cfg, const TriangleRef& tri);

enum class Predicate { Omega1, Omega2, Omega3 };

enum class Subject { Bond, Triangle, Vertex };

struct Violation {
  Predicate predicate;
  Subject subject;
  std::size_t index;  // bond, triangle class, or site index
  double value;       // bond length, determinant, or angle sum
};

struct ReportFragment {
  bool ok = true;
  std::vector<Violation> violations;
};

struct AdmissibilityReport {
  bool omega1_ok = false;
  bool omega2_ok = false;
  bool omega3_ok = false;
  std::vector<Violation> violations;

  bool admissible() const { return omega1_ok && omega2_ok && omega3_ok; }
};

inline constexpr double kAngleSumTolerance = 1e-9;

ReportFragment check_omega1(const Configuration& cfg);
ReportFragment check_omega3(const Configuration& cfg);

// Sum of the six image angles at vertex x.
double vertex_angle_sum(const Configuration& cfg, LatticeIndex x);

// Injectivity certificate: positive determinants on all triangles and image
// angle sum 2 pi at every vertex. Together with the periodic boundary
// condition this makes the extension a homeomorphism.
ReportFragment check_omega2_fast(const Configuration& cfg);

// Exact injectivity test: pairwise open-interior overlap among the image
// triangles of the representatives and their eight periodic neighbours.
ReportFragment check_omega2_oracle(const Configuration& cfg);

// Checks in order Omega1, Omega3, Omega2 (fast); stops at the first failure,
// leaving later flags false.
AdmissibilityReport is_admissible(const Configuration& cfg);

struct Translate {
  LatticeIndex b;
};
struct Reflect {};
using SymmetryOp = std::variant<Translate, Reflect>;

// Translate: x -> w(x + b) - w(b). Reflect: x -> -w(-x).
Configuration symmetry_map(const Configuration& cfg, const SymmetryOp& op);

std::string to_string(Predicate p);
std::string describe(const Violation& v, int n);

}  // namespace hardlattice
