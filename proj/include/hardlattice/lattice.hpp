#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hardlattice/types.hpp"

namespace hardlattice {

// Point u + v*tau of the triangular lattice, tau = exp(i*pi/3).
struct LatticeIndex {
  int u = 0;
  int v = 0;

  friend constexpr bool operator==(LatticeIndex, LatticeIndex) = default;
  friend constexpr LatticeIndex operator+(LatticeIndex a, LatticeIndex b) { return {a.u + b.u, a.v + b.v}; }
  friend constexpr LatticeIndex operator-(LatticeIndex a, LatticeIndex b) { return {a.u - b.u, a.v - b.v}; }
  friend constexpr LatticeIndex operator-(LatticeIndex a) { return {-a.u, -a.v}; }
  friend constexpr LatticeIndex operator*(int k, LatticeIndex a) { return {k * a.u, k * a.v}; }
};

// Multiplication by tau: tau*(u + v tau) = -v + (u + v) tau, using tau^2 = tau - 1.
constexpr LatticeIndex rotate_sixth(LatticeIndex a) { return {-a.v, a.u + a.v}; }

// The six neighbour offsets in counterclockwise order starting at 1.
inline constexpr std::array<LatticeIndex, 6> kNeighborOffsets{
    LatticeIndex{1, 0}, LatticeIndex{0, 1}, LatticeIndex{-1, 1},
    LatticeIndex{-1, 0}, LatticeIndex{0, -1}, LatticeIndex{1, -1}};

bool is_neighbor_offset(LatticeIndex z);

inline Point2 embed(LatticeIndex idx) {
  return Point2(idx.u + 0.5 * idx.v, idx.v * (kSqrt3 / 2.0));
}

// Componentwise reduction into {0, ..., N-1}^2.
LatticeIndex canonical(LatticeIndex idx, int n);

// Row-major index v*N + u of a canonical site.
inline std::size_t site_index(LatticeIndex canonical_idx, int n) {
  return static_cast<std::size_t>(canonical_idx.v) * static_cast<std::size_t>(n) +
         static_cast<std::size_t>(canonical_idx.u);
}
inline LatticeIndex site_from_index(std::size_t i, int n) {
  return {static_cast<int>(i % static_cast<std::size_t>(n)), static_cast<int>(i / static_cast<std::size_t>(n))};
}

// Undirected bond {a, b}; a is canonical, b = a + offset is left unreduced so
// that the bond vector is recoverable under the periodic extension.
struct Bond {
  LatticeIndex a;
  LatticeIndex b;
};

enum class Orientation { Up, Down };

// Open triangle with corners x, x + z, x + tau z, where z = 1 (Up) or z = tau (Down).
struct TriangleRef {
  LatticeIndex base;
  Orientation orientation = Orientation::Up;

  LatticeIndex edge_direction() const {
    return orientation == Orientation::Up ? LatticeIndex{1, 0} : LatticeIndex{0, 1};
  }
  // Counterclockwise corners.
  std::array<LatticeIndex, 3> corners() const {
    const LatticeIndex z = edge_direction();
    return {base, base + z, base + rotate_sixth(z)};
  }
  friend bool operator==(const TriangleRef&, const TriangleRef&) = default;
};

// Bond classes: three forward offsets (1,0), (0,1), (-1,1) per canonical site,
// sites in row-major order. Exactly 3N^2 entries.
std::vector<Bond> bonds(int n);

// Triangle classes in row-major order of the canonical base, Up before Down.
// Representatives have all corners in {x + tau y | 0 <= x, y <= N}: Up bases
// lie in [0,N-1]^2, Down bases in [1,N] x [0,N-1].
std::vector<TriangleRef> triangles(int n);

// Index of a triangle's class in the enumeration of triangles(n).
std::size_t triangle_class_index(const TriangleRef& tri, int n);

struct StarEntry {
  TriangleRef triangle;  // actual (unreduced) triangle with the vertex as a corner
  int slot = 0;          // which corner of triangle.corners() is the vertex
};

// The six triangles incident to x, in counterclockwise order around x.
std::array<StarEntry, 6> vertex_star(LatticeIndex x, int n);

void require_lattice_size(int n);

}  // namespace hardlattice
