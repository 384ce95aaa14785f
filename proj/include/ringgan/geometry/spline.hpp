#pragma once

#include <vector>

#include "ringgan/geometry/ring.hpp"

namespace ringgan::geometry {

// Closed centripetal Catmull-Rom curves. Knot gaps are |P[k+1] - P[k]|^(1/2);
// the curve parameter t in [0, 1] is the knot value normalized by the total
// knot length, so control point k sits at t = knots[k]. Each interval is the
// cubic Hermite segment whose end tangents reproduce the Barry-Goldman
// pyramid, which makes the curve C1 in t at every knot including the wrap.

/// Normalized knot values, one per control point; knots[0] == 0.
std::vector<double> spline_knots(const Spline& spline);

Vec3 eval_spline(const Spline& spline, double t);
/// First derivative with respect to t.
Vec3 eval_spline_derivative(const Spline& spline, double t);
/// Second derivative with respect to t (discontinuous at knots).
Vec3 eval_spline_second_derivative(const Spline& spline, double t);

/// `count` points at t = i / count, i in [0, count).
std::vector<Vec3> sample_spline(const Spline& spline, int count);

}  // namespace ringgan::geometry
