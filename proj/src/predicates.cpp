#include "hardlattice/predicates.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hardlattice {

namespace {

// Error-free transformations (Knuth two-sum, fma-based two-product).
inline void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double bv = s - a;
  const double av = s - bv;
  e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
  p = a * b;
  e = std::fma(a, b, -p);
}

// Nonoverlapping expansion with components in increasing magnitude.
struct Expansion {
  std::array<double, 24> c{};
  int size = 0;

  void grow(double b) {
    int out = 0;
    double q = b;
    for (int i = 0; i < size; ++i) {
      double s = 0.0;
      double e = 0.0;
      two_sum(q, c[static_cast<std::size_t>(i)], s, e);
      q = s;
      if (e != 0.0) c[static_cast<std::size_t>(out++)] = e;
    }
    if (q != 0.0) c[static_cast<std::size_t>(out++)] = q;
    size = out;
  }

  int sign() const {
    if (size == 0) return 0;
    const double top = c[static_cast<std::size_t>(size - 1)];
    return top > 0.0 ? 1 : (top < 0.0 ? -1 : 0);
  }
};

int orient2d_exact(const Point2& a, const Point2& b, const Point2& c) {
  // det = ax*by - ax*cy - ay*bx + ay*cx + bx*cy - by*cx
  const double terms[6][3] = {
      {a.x(), b.y(), 1.0},  {a.x(), c.y(), -1.0}, {a.y(), b.x(), -1.0},
      {a.y(), c.x(), 1.0},  {b.x(), c.y(), 1.0},  {b.y(), c.x(), -1.0},
  };
  Expansion sum;
  for (const auto& t : terms) {
    double p = 0.0;
    double e = 0.0;
    two_product(t[0], t[1], p, e);
    sum.grow(t[2] * p);
    sum.grow(t[2] * e);
  }
  return sum.sign();
}

}  // namespace

int orient2d(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x() - c.x()) * (b.y() - c.y());
  const double detright = (a.y() - c.y()) * (b.x() - c.x());
  const double det = detleft - detright;
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2.0;
  constexpr double errbound = (3.0 + 16.0 * eps) * eps;
  const double bound = errbound * (std::abs(detleft) + std::abs(detright));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient2d_exact(a, b, c);
}

namespace {

// Separating-axis test: the interiors of two convex polygons are disjoint iff
// the line through some edge of one of them weakly separates the two.
bool edge_separates(const TriangleCorners& ccw, const TriangleCorners& other) {
  for (int i = 0; i < 3; ++i) {
    const Point2& p = ccw[static_cast<std::size_t>(i)];
    const Point2& q = ccw[static_cast<std::size_t>((i + 1) % 3)];
    bool all_outside = true;
    for (const Point2& r : other) {
      if (orient2d(p, q, r) > 0) {
        all_outside = false;
        break;
      }
    }
    if (all_outside) return true;
  }
  return false;
}

TriangleCorners counterclockwise(const TriangleCorners& t) {
  const int o = orient2d(t[0], t[1], t[2]);
  if (o == 0) throw std::invalid_argument("triangles_overlap: degenerate triangle");
  if (o > 0) return t;
  return {t[0], t[2], t[1]};
}

}  // namespace

bool triangles_overlap(const TriangleCorners& t1, const TriangleCorners& t2) {
  const TriangleCorners a = counterclockwise(t1);
  const TriangleCorners b = counterclockwise(t2);
  return !edge_separates(a, b) && !edge_separates(b, a);
}

}  // namespace hardlattice
