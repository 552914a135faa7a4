#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "orchard/labels.hpp"
#include "orchard/parallel.hpp"
#include "orchard/sphere.hpp"
#include "orchard/tracker.hpp"

namespace orchard {

struct Intrinsics {
  double focal = 1000.0;
  double cx = 640.0;
  double cy = 480.0;
  double width = 1280.0;
  double height = 960.0;
};

struct Box3 {
  Point3 min{-2.25, -1.8, -0.6};
  Point3 max{2.25, 1.8, 0.6};
  Point3 centroid() const {
    return {(min.x + max.x) / 2, (min.y + max.y) / 2, (min.z + max.z) / 2};
  }
};

enum class PathKind { Sweep, Arc };

/// Camera trajectory. Sweep: `sweeps` horizontal passes from bottom to top
/// joined by vertical segments into one S-shaped path, at `distance` in
/// front of the canopy. Arc: a horizontal arc of radius `distance` around
/// the canopy centroid spanning +-`arc_half_angle` radians. Cameras always
/// aim at the canopy centroid.
struct CameraPath {
  PathKind kind = PathKind::Sweep;
  int sweeps = 3;
  double half_width = 1.05;
  double y_low = -0.7;
  double y_high = 0.7;
  double distance = 2.2;
  double arc_half_angle = 0.5;
};

/// Leaf/branch occlusion stand-in: each sphere is hidden for a Poisson number
/// of frame intervals with uniformly drawn start and length.
struct OcclusionModel {
  double expected_blackouts = 1.0;
  int min_duration = 3;
  int max_duration = 12;
};

struct SceneConfig {
  int n_spheres = 150;
  double radius_min = 0.035;
  double radius_max = 0.05;
  Box3 canopy;
  CameraPath path;
  int n_frames = 300;
  Intrinsics intrinsics;
  OcclusionModel occlusion;
  std::uint64_t seed = 1;
  double visibility_threshold = 0.5;
  int occlusion_resolution = 64;
  int max_placement_attempts = 200000;
};

struct Sphere {
  int id = 1;
  Point3 center;
  double ray = 0;
};

struct Blackout {
  int sphere_id;
  int first_frame;
  int last_frame;
};

struct GroundTruthScene {
  SceneConfig config;
  std::vector<Sphere> spheres;
  CameraSet cams;
  std::vector<Blackout> blackouts;
  LabeledBoxes gt_boxes;  // sorted by frame, then id
};

struct Disk {
  Pixel center;
  double radius;
};

/// Fraction of `target` covered by the union of `occluders`, estimated on a
/// resolution x resolution midpoint grid over the target's bounding square.
double occlusion_fraction(std::span<const Disk> occluders, const Disk& target, int resolution = 64);

/// Camera poses along the configured path, frames numbered from 1.
CameraSet camera_path(const SceneConfig& cfg);

/// Deterministic under cfg.seed. Throws InvalidConfig for invalid settings
/// and InfeasiblePlacement when non-overlapping placement fails.
GroundTruthScene generate_scene(const SceneConfig& cfg, Execution exec = Execution::Parallel);

/// Visible boxes of every frame: projection, disk occlusion against nearer
/// spheres, image-border and blackout filtering. One frame per iteration.
LabeledBoxes render_boxes(const SceneConfig& cfg, std::span<const Sphere> spheres, const CameraSet& cams,
                          std::span<const Blackout> blackouts, Execution exec);

/// Groups labeled boxes into one FrameDetections per frame in [first, last],
/// including empty frames.
std::vector<FrameDetections> frames_from_labels(const LabeledBoxes& boxes, int first, int last);

/// Number of distinct ids.
int distinct_ids(const LabeledBoxes& boxes);

}  // namespace orchard
