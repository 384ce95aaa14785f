#include "ringgan/geometry/spline.hpp"

#include <algorithm>
#include <cmath>

#include "ringgan/error.hpp"

namespace ringgan::geometry {
namespace {

struct Segment {
  Vec3 p1;
  Vec3 p2;
  Vec3 m1;
  Vec3 m2;
  double u;
  double scale;  // du/dt
};

double knot_gap(const Vec3& a, const Vec3& b) {
  // Coincident points would divide by zero; the floor keeps the segment finite.
  return std::max(std::sqrt((b - a).norm()), 1e-12);
}

void require_valid(const Spline& spline) {
  if (spline.control_points.size() < 4) throw ValidationError("spline needs at least 4 control points");
}

/// Unnormalized cumulative knots with the closing gap appended (size n + 1).
std::vector<double> cumulative_knots(const std::vector<Vec3>& cp) {
  const std::size_t n = cp.size();
  std::vector<double> knots(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) knots[k + 1] = knots[k] + knot_gap(cp[k], cp[(k + 1) % n]);
  return knots;
}

Segment locate(const Spline& spline, double t) {
  require_valid(spline);
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("spline parameter must lie in [0, 1]");
  const auto& cp = spline.control_points;
  const int n = static_cast<int>(cp.size());
  const std::vector<double> knots = cumulative_knots(cp);
  const double total = knots.back();
  const double tau = t * total;
  int seg = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), tau) - knots.begin()) - 1;
  seg = std::clamp(seg, 0, n - 1);
  auto at = [&](int k) -> const Vec3& { return cp[static_cast<std::size_t>(((k % n) + n) % n)]; };
  const Vec3& p0 = at(seg - 1);
  const Vec3& p1 = at(seg);
  const Vec3& p2 = at(seg + 1);
  const Vec3& p3 = at(seg + 2);
  const double t01 = knot_gap(p0, p1);
  const double t12 = knots[seg + 1] - knots[seg];
  const double t23 = knot_gap(p2, p3);
  const Vec3 m1 = t12 * ((p1 - p0) / t01 - (p2 - p0) / (t01 + t12) + (p2 - p1) / t12);
  const Vec3 m2 = t12 * ((p2 - p1) / t12 - (p3 - p1) / (t12 + t23) + (p3 - p2) / t23);
  const double u = seg == n - 1 && t == 1.0 ? 1.0 : std::clamp((tau - knots[seg]) / t12, 0.0, 1.0);
  return {p1, p2, m1, m2, u, total / t12};
}

}  // namespace

Vec3 eval_spline(const Spline& spline, double t) {
  const Segment s = locate(spline, t);
  const double u = s.u;
  const double u2 = u * u;
  const double u3 = u2 * u;
  const double h00 = 2 * u3 - 3 * u2 + 1;
  const double h10 = u3 - 2 * u2 + u;
  const double h01 = -2 * u3 + 3 * u2;
  const double h11 = u3 - u2;
  return h00 * s.p1 + h10 * s.m1 + h01 * s.p2 + h11 * s.m2;
}

Vec3 eval_spline_derivative(const Spline& spline, double t) {
  const Segment s = locate(spline, t);
  const double u = s.u;
  const double u2 = u * u;
  const double d00 = 6 * u2 - 6 * u;
  const double d10 = 3 * u2 - 4 * u + 1;
  const double d01 = -6 * u2 + 6 * u;
  const double d11 = 3 * u2 - 2 * u;
  return s.scale * (d00 * s.p1 + d10 * s.m1 + d01 * s.p2 + d11 * s.m2);
}

Vec3 eval_spline_second_derivative(const Spline& spline, double t) {
  const Segment s = locate(spline, t);
  const double u = s.u;
  const double dd00 = 12 * u - 6;
  const double dd10 = 6 * u - 4;
  const double dd01 = -12 * u + 6;
  const double dd11 = 6 * u - 2;
  return s.scale * s.scale * (dd00 * s.p1 + dd10 * s.m1 + dd01 * s.p2 + dd11 * s.m2);
}

std::vector<double> spline_knots(const Spline& spline) {
  require_valid(spline);
  std::vector<double> knots = cumulative_knots(spline.control_points);
  const double total = knots.back();
  knots.pop_back();
  for (auto& k : knots) k /= total;
  return knots;
}

std::vector<Vec3> sample_spline(const Spline& spline, int count) {
  std::vector<Vec3> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(eval_spline(spline, static_cast<double>(i) / count));
  return out;
}

}  // namespace ringgan::geometry
