#pragma once

#include <array>

#include "hardlattice/types.hpp"

namespace hardlattice {

using TriangleCorners = std::array<Point2, 3>;

// Exact sign of the orientation determinant of (a, b, c): +1 counterclockwise,
// -1 clockwise, 0 collinear. A floating-point filter handles the common case;
// otherwise the determinant is summed exactly as a floating-point expansion.
int orient2d(const Point2& a, const Point2& b, const Point2& c);

// True iff the open interiors of two nondegenerate triangles intersect.
// Shared edges and corners do not count as overlap. Throws
// std::invalid_argument on a degenerate triangle.
bool triangles_overlap(const TriangleCorners& t1, const TriangleCorners& t2);

}  // namespace hardlattice
