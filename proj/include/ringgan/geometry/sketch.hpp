#pragma once

#include <vector>

#include "ringgan/geometry/camera.hpp"
#include "ringgan/image.hpp"

namespace ringgan::geometry {

/// Stroke color of sketch-domain images (#303030 on white).
inline const Rgb kSketchInk = Rgb::from_hex(0x303030);
inline const Rgb kSketchPaper = Rgb::from_hex(0xFFFFFF);

/// Points sampled per strand when stroking: at least 256 and dense enough
/// that consecutive projected points are well under a pixel apart.
int sketch_samples_per_strand(const Camera& camera);

/// Stroke width in pixels matching the tube's projected diameter at the ring
/// center distance; proportional to ring.tube_radius (floored at 1 px).
double sketch_line_width(const RingModel& ring, const Camera& camera);

/// Projected strand polylines (closed; points behind the eye are dropped).
std::vector<std::vector<Eigen::Vector2d>> project_strands(const RingModel& ring, const Camera& camera);

/// Perspective line drawing of every strand with round-capped strokes of
/// `line_width` px, 4x4 supersampled. No hidden-line removal. Throws when the
/// ring lies entirely behind the camera.
Image project_sketch(const RingModel& ring, const Camera& camera, double line_width);

}  // namespace ringgan::geometry
