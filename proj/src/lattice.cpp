#include "hardlattice/lattice.hpp"

#include <stdexcept>
#include <string>

namespace hardlattice {

namespace {

int floor_mod(int a, int n) {
  const int r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

void require_lattice_size(int n) {
  if (n < 2) {
    throw std::invalid_argument("lattice size N must be at least 2, got " + std::to_string(n));
  }
}

bool is_neighbor_offset(LatticeIndex z) {
  for (const auto& o : kNeighborOffsets) {
    if (o == z) return true;
  }
  return false;
}

LatticeIndex canonical(LatticeIndex idx, int n) {
  if (n < 1) throw std::invalid_argument("canonical: N must be positive");
  return {floor_mod(idx.u, n), floor_mod(idx.v, n)};
}

std::vector<Bond> bonds(int n) {
  require_lattice_size(n);
  std::vector<Bond> out;
  out.reserve(static_cast<std::size_t>(3 * n * n));
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      const LatticeIndex a{u, v};
      for (int k = 0; k < 3; ++k) out.push_back({a, a + kNeighborOffsets[k]});
    }
  }
  return out;
}

std::vector<TriangleRef> triangles(int n) {
  require_lattice_size(n);
  std::vector<TriangleRef> out;
  out.reserve(static_cast<std::size_t>(2 * n * n));
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      out.push_back({{u, v}, Orientation::Up});
      out.push_back({{u == 0 ? n : u, v}, Orientation::Down});
    }
  }
  return out;
}

std::size_t triangle_class_index(const TriangleRef& tri, int n) {
  return 2 * site_index(canonical(tri.base, n), n) + (tri.orientation == Orientation::Down ? 1 : 0);
}

std::array<StarEntry, 6> vertex_star(LatticeIndex x, int n) {
  require_lattice_size(n);
  // Sectors counterclockwise from direction 1; slot s means x == corners()[s].
  return {{
      {{x, Orientation::Up}, 0},
      {{x, Orientation::Down}, 0},
      {{x - LatticeIndex{1, 0}, Orientation::Up}, 1},
      {{x - LatticeIndex{0, 1}, Orientation::Down}, 1},
      {{x - LatticeIndex{0, 1}, Orientation::Up}, 2},
      {{x + LatticeIndex{1, -1}, Orientation::Down}, 2},
  }};
}

}  // namespace hardlattice
