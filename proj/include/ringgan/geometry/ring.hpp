#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace ringgan::geometry {

using Vec3 = Eigen::Vector3d;

/// User-facing ring parameters. Lengths are in model units; z is the ring axis.
struct RingSpec {
  int n_strands = 3;
  double ring_radius = 1.0;
  double tube_radius = 0.06;
  double height_amplitude = 0.15;
  double radial_amplitude = 0.12;
  int n_control_points = 8;
  std::uint64_t seed = 0;

  friend bool operator==(const RingSpec&, const RingSpec&) = default;
};

struct FieldError {
  std::string field;
  std::string message;
};

/// Every violated bound, in field order.
std::vector<FieldError> spec_errors(const RingSpec& spec);

/// Throws ValidationError naming the first violated bound.
void validate(const RingSpec& spec);

struct Spline {
  std::vector<Vec3> control_points;
  bool closed = true;
};

struct RingModel {
  std::vector<Spline> strands;
  double tube_radius = 0.0;
  RingSpec spec;
  std::string id;
};

/// Each strand places its control points at equally spaced angles (with a
/// per-strand random phase) and perturbs them radially and vertically.
/// Strand i draws from substream i of spec.seed.
RingModel generate_ring(const RingSpec& spec);

void to_json(nlohmann::json& j, const RingSpec& spec);
/// Missing fields keep their defaults; unknown fields are rejected.
void from_json(const nlohmann::json& j, RingSpec& spec);

}  // namespace ringgan::geometry
