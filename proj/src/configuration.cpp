#include "hardlattice/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hardlattice/geometry.hpp"

namespace hardlattice {

namespace {

constexpr std::size_t kMaxRecordedViolations = 64;

void record(ReportFragment& r, Violation v) {
  r.ok = false;
  if (r.violations.size() < kMaxRecordedViolations) r.violations.push_back(v);
}

}  // namespace

void validate_parameters(int n, double l, double epsilon) {
  require_lattice_size(n);
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  if (!(l > 1.0) || !std::isfinite(l)) {
    throw std::invalid_argument("side length l must exceed 1");
  }
}

Configuration::Configuration(int n, double l, double epsilon, std::vector<Point2> positions)
    : n_(n), l_(l), epsilon_(epsilon), positions_(std::move(positions)) {
  validate_parameters(n, l, epsilon);
  if (positions_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    throw std::invalid_argument("configuration needs exactly N^2 positions");
  }
  if (positions_[0] != Point2::Zero()) {
    throw std::invalid_argument("gauge violated: site (0,0) must sit at the origin");
  }
  // Normalize a possible -0.0 so that serialization is canonical.
  positions_[0] = Point2::Zero();
  for (const auto& p : positions_) {
    if (!p.allFinite()) throw std::invalid_argument("configuration positions must be finite");
  }
}

Point2 Configuration::position(LatticeIndex idx) const {
  const LatticeIndex site = canonical(idx, n_);
  const LatticeIndex y = period_of(idx, site, n_);
  if (y.u == 0 && y.v == 0) return positions_[site_index(site, n_)];
  return positions_[site_index(site, n_)] + periodic_shift(y, l_, n_);
}

Configuration standard_config(int n, double l, double epsilon) {
  validate_parameters(n, l, epsilon);
  if (!(l < 1.0 + epsilon)) {
    throw std::invalid_argument("standard configuration requires l < 1 + epsilon");
  }
  std::vector<Point2> pos(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = l * embed(site_from_index(i, n));
  return Configuration(n, l, epsilon, std::move(pos));
}

Mat2 gradient_from_edges(Orientation orientation, const Vec2& d1, const Vec2& d2) {
  constexpr double inv_sqrt3 = 1.0 / kSqrt3;
  Mat2 a;
  if (orientation == Orientation::Up) {
    // B = [e1, embed(tau)], B^-1 = [[1, -1/sqrt3], [0, 2/sqrt3]]
    a.col(0) = d1;
    a.col(1) = (2.0 * d2 - d1) * inv_sqrt3;
  } else {
    // B = [embed(tau), embed(tau^2)], B^-1 = [[1, 1/sqrt3], [-1, 1/sqrt3]]
    a.col(0) = d1 - d2;
    a.col(1) = (d1 + d2) * inv_sqrt3;
  }
  return a;
}

TriangleCorners image_corners(const Configuration& cfg, const TriangleRef& tri) {
  const auto c = tri.corners();
  return {cfg.position(c[0]), cfg.position(c[1]), cfg.position(c[2])};
}

Mat2 triangle_gradient(const Configuration& cfg, const TriangleRef& tri) {
  const auto p = image_corners(cfg, tri);
  return gradient_from_edges(tri.orientation, p[1] - p[0], p[2] - p[0]);
}

ReportFragment check_omega1(const Configuration& cfg) {
  ReportFragment r;
  const double upper = 1.0 + cfg.epsilon();
  const auto bs = bonds(cfg.n());
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const double len = (cfg.position(bs[i].b) - cfg.position(bs[i].a)).norm();
    if (!(len > 1.0 && len < upper)) record(r, {Predicate::Omega1, Subject::Bond, i, len});
  }
  return r;
}

ReportFragment check_omega3(const Configuration& cfg) {
  ReportFragment r;
  const auto ts = triangles(cfg.n());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double det = triangle_gradient(cfg, ts[i]).determinant();
    if (!(det > 0.0)) record(r, {Predicate::Omega3, Subject::Triangle, i, det});
  }
  return r;
}

double vertex_angle_sum(const Configuration& cfg, LatticeIndex x) {
  double sum = 0.0;
  for (const StarEntry& e : vertex_star(x, cfg.n())) {
    const auto c = e.triangle.corners();
    const auto s = static_cast<std::size_t>(e.slot);
    const Point2 p = cfg.position(c[s]);
    const Point2 a = cfg.position(c[(s + 1) % 3]);
    const Point2 b = cfg.position(c[(s + 2) % 3]);
    sum += turning_angle(a - p, b - p);
  }
  return sum;
}

ReportFragment check_omega2_fast(const Configuration& cfg) {
  ReportFragment r;
  const auto ts = triangles(cfg.n());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double det = triangle_gradient(cfg, ts[i]).determinant();
    if (!(det > 0.0)) record(r, {Predicate::Omega2, Subject::Triangle, i, det});
  }
  for (std::size_t i = 0; i < cfg.num_sites(); ++i) {
    const double sum = vertex_angle_sum(cfg, site_from_index(i, cfg.n()));
    if (!(std::abs(sum - kTwoPi) < kAngleSumTolerance)) {
      record(r, {Predicate::Omega2, Subject::Vertex, i, sum});
    }
  }
  return r;
}

namespace {

struct Box {
  double xmin, xmax, ymin, ymax;
};

Box bounding_box(const TriangleCorners& t) {
  Box b{t[0].x(), t[0].x(), t[0].y(), t[0].y()};
  for (const auto& p : t) {
    b.xmin = std::min(b.xmin, p.x());
    b.xmax = std::max(b.xmax, p.x());
    b.ymin = std::min(b.ymin, p.y());
    b.ymax = std::max(b.ymax, p.y());
  }
  return b;
}

bool boxes_overlap(const Box& a, const Box& b) {
  return a.xmin < b.xmax && b.xmin < a.xmax && a.ymin < b.ymax && b.ymin < a.ymax;
}

}  // namespace

ReportFragment check_omega2_oracle(const Configuration& cfg) {
  ReportFragment r;
  const int n = cfg.n();
  const auto reps = triangles(n);

  struct Image {
    std::size_t cls;
    LatticeIndex shift;
    TriangleCorners corners;
    Box box;
    bool degenerate;
  };
  std::vector<Image> images;
  images.reserve(9 * reps.size());
  for (int sv = -1; sv <= 1; ++sv) {
    for (int su = -1; su <= 1; ++su) {
      const LatticeIndex shift{su, sv};
      for (std::size_t i = 0; i < reps.size(); ++i) {
        // Corners are evaluated from absolute lattice indices so that shared
        // corners of neighbouring images are bitwise identical.
        const TriangleRef t{reps[i].base + n * shift, reps[i].orientation};
        const TriangleCorners c = image_corners(cfg, t);
        images.push_back({i, shift, c, bounding_box(c), orient2d(c[0], c[1], c[2]) == 0});
      }
    }
  }

  std::vector<const Image*> central;
  for (const auto& im : images) {
    if (im.shift == LatticeIndex{0, 0}) {
      central.push_back(&im);
      if (im.degenerate) record(r, {Predicate::Omega3, Subject::Triangle, im.cls, 0.0});
    }
  }
  if (!r.ok) return r;

  for (const Image* a : central) {
    for (const auto& b : images) {
      if (b.shift == LatticeIndex{0, 0} && b.cls <= a->cls) continue;
      if (!boxes_overlap(a->box, b.box)) continue;
      if (b.degenerate) continue;  // the degenerate translate of a central image was reported above
      if (triangles_overlap(a->corners, b.corners)) {
        record(r, {Predicate::Omega2, Subject::Triangle, a->cls, static_cast<double>(b.cls)});
      }
    }
  }
  return r;
}

AdmissibilityReport is_admissible(const Configuration& cfg) {
  AdmissibilityReport rep;
  auto take = [&rep](ReportFragment&& f) {
    rep.violations.insert(rep.violations.end(), f.violations.begin(), f.violations.end());
    return f.ok;
  };
  rep.omega1_ok = take(check_omega1(cfg));
  if (!rep.omega1_ok) return rep;
  rep.omega3_ok = take(check_omega3(cfg));
  if (!rep.omega3_ok) return rep;
  rep.omega2_ok = take(check_omega2_fast(cfg));
  return rep;
}

Configuration symmetry_map(const Configuration& cfg, const SymmetryOp& op) {
  const int n = cfg.n();
  std::vector<Point2> pos(cfg.num_sites());
  if (const auto* t = std::get_if<Translate>(&op)) {
    const Point2 origin = cfg.position(t->b);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      pos[i] = cfg.position(site_from_index(i, n) + t->b) - origin;
    }
  } else {
    for (std::size_t i = 0; i < pos.size(); ++i) pos[i] = -cfg.position(-site_from_index(i, n));
  }
  pos[0] = Point2::Zero();
  return Configuration(n, cfg.l(), cfg.epsilon(), std::move(pos));
}

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::Omega1: return "omega1";
    case Predicate::Omega2: return "omega2";
    case Predicate::Omega3: return "omega3";
  }
  return "unknown";
}

std::string describe(const Violation& v, int n) {
  std::ostringstream os;
  os << to_string(v.predicate) << ": ";
  switch (v.subject) {
    case Subject::Bond: {
      const auto s = site_from_index(v.index / 3, n);
      os << "bond " << v.index << " at site (" << s.u << "," << s.v << ") length " << v.value;
      break;
    }
    case Subject::Triangle: {
      const auto s = site_from_index(v.index / 2, n);
      os << "triangle " << v.index << " (" << (v.index % 2 ? "down" : "up") << " at " << s.u << "," << s.v
         << ") value " << v.value;
      break;
    }
    case Subject::Vertex: {
      const auto s = site_from_index(v.index, n);
      os << "vertex (" << s.u << "," << s.v << ") angle sum " << v.value;
      break;
    }
  }
  return os.str();
}

}  // namespace hardlattice
