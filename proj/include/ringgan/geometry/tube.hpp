#pragma once

#include "ringgan/geometry/mesh.hpp"

namespace ringgan::geometry {

struct TubeMesh {
  TriMesh mesh;
  /// Set when the tube radius reaches the curve's minimum radius of
  /// curvature, i.e. neighbouring cross-sections may intersect.
  bool self_intersection_warning = false;
};

/// Sweeps a circle of `radius` along the closed spline using parallel-transport
/// frames. Produces n_u * n_v vertices and 2 * n_u * n_v outward-facing
/// triangles with torus topology. Requires n_u >= 8 and n_v >= 6.
TubeMesh extrude_tube(const Spline& spline, double radius, int n_u, int n_v);

struct TubeResolution {
  int n_u = 192;
  int n_v = 16;
};

/// Union of all strand tubes of a ring (each strand its own closed shell).
TubeMesh ring_mesh(const RingModel& ring, TubeResolution resolution = {});

}  // namespace ringgan::geometry
