#include "ringgan/geometry/ring.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ringgan/error.hpp"
#include "ringgan/rng.hpp"

namespace ringgan::geometry {
namespace {

constexpr std::uint64_t kStrandStream = 0x5354524E;  // "STRN"

}  // namespace

std::vector<FieldError> spec_errors(const RingSpec& spec) {
  std::vector<FieldError> errors;
  auto fail = [&errors](const char* field, const char* bound) { errors.push_back({field, bound}); };
  if (spec.n_strands < 1) fail("n_strands", "must be >= 1");
  if (spec.n_control_points < 4) fail("n_control_points", "must be >= 4");
  if (!std::isfinite(spec.ring_radius) || spec.ring_radius <= 0.0) fail("ring_radius", "must be > 0");
  if (!(spec.tube_radius > 0.0)) {
    fail("tube_radius", "must be > 0");
  } else if (!(spec.tube_radius < spec.ring_radius)) {
    fail("tube_radius", "must be < ring_radius");
  }
  if (!(spec.radial_amplitude >= 0.0)) {
    fail("radial_amplitude", "must be >= 0");
  } else if (!(spec.radial_amplitude < spec.ring_radius)) {
    fail("radial_amplitude", "must be < ring_radius");
  }
  if (!(spec.height_amplitude >= 0.0) || !std::isfinite(spec.height_amplitude)) {
    fail("height_amplitude", "must be finite and >= 0");
  }
  return errors;
}

void validate(const RingSpec& spec) {
  const auto errors = spec_errors(spec);
  if (!errors.empty()) throw ValidationError("RingSpec." + errors.front().field + " " + errors.front().message);
}

RingModel generate_ring(const RingSpec& spec) {
  validate(spec);
  RingModel model;
  model.spec = spec;
  model.tube_radius = spec.tube_radius;
  std::ostringstream id;
  id << "ring-" << std::hex << spec.seed;
  model.id = id.str();

  const int n = spec.n_control_points;
  for (int s = 0; s < spec.n_strands; ++s) {
    Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(s), kStrandStream));
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi / n);
    Spline strand;
    strand.control_points.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      const double angle = phase + 2.0 * std::numbers::pi * k / n;
      const double radius = spec.ring_radius + rng.uniform(-1.0, 1.0) * spec.radial_amplitude;
      const double height = rng.uniform(-1.0, 1.0) * spec.height_amplitude;
      strand.control_points.emplace_back(radius * std::cos(angle), radius * std::sin(angle), height);
    }
    model.strands.push_back(std::move(strand));
  }
  return model;
}

void to_json(nlohmann::json& j, const RingSpec& spec) {
  j = nlohmann::json{{"n_strands", spec.n_strands},
                     {"ring_radius", spec.ring_radius},
                     {"tube_radius", spec.tube_radius},
                     {"height_amplitude", spec.height_amplitude},
                     {"radial_amplitude", spec.radial_amplitude},
                     {"n_control_points", spec.n_control_points},
                     {"seed", spec.seed}};
}

void from_json(const nlohmann::json& j, RingSpec& spec) {
  if (!j.is_object()) throw ValidationError("RingSpec must be a JSON object");
  auto integer = [](const std::string& key, const nlohmann::json& v) {
    if (!v.is_number_integer()) throw ValidationError("RingSpec." + key + " must be an integer");
    return v;
  };
  auto number = [](const std::string& key, const nlohmann::json& v) {
    if (!v.is_number()) throw ValidationError("RingSpec." + key + " must be a number");
    return v.get<double>();
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "n_strands") {
      spec.n_strands = integer(key, value).get<int>();
    } else if (key == "n_control_points") {
      spec.n_control_points = integer(key, value).get<int>();
    } else if (key == "seed") {
      const bool negative = value.is_number_integer() && !value.is_number_unsigned() && value.get<std::int64_t>() < 0;
      if (!value.is_number_integer() || negative) throw ValidationError("RingSpec.seed must be a non-negative integer");
      spec.seed = value.get<std::uint64_t>();
    } else if (key == "ring_radius") {
      spec.ring_radius = number(key, value);
    } else if (key == "tube_radius") {
      spec.tube_radius = number(key, value);
    } else if (key == "height_amplitude") {
      spec.height_amplitude = number(key, value);
    } else if (key == "radial_amplitude") {
      spec.radial_amplitude = number(key, value);
    } else {
      throw ValidationError("RingSpec has no field '" + key + "'");
    }
  }
}

}  // namespace ringgan::geometry
