#pragma once

#include <map>
#include <optional>
#include <vector>

#include "orchard/geometry.hpp"

namespace orchard {

/// Frame index -> box; at most one box per frame, frames increasing.
using TrackObservations = std::map<int, BoundingBox>;
using CameraSet = std::map<int, CameraMatrix>;

struct ImageSize {
  double width = 0;
  double height = 0;
};

struct RansacParams {
  double max_geom_error = 8.0;  // px
  double inliers_ratio = 0.5;
  int max_iters = 500;
  int min_track_len = 5;  // the tracker estimates once a track holds more boxes than this
};

struct Triangulation {
  Point3 center;
  std::vector<int> inlier_frames;  // ascending
};

struct SphereEstimate {
  Point3 center;
  double ray = 0;  // scene units
  std::vector<int> inlier_frames;
};

/// Consensus triangulation over 3-box samples taken in lexicographic frame
/// order. On consensus the point is refit from all inliers, and the inlier
/// set is recomputed against the refit point until it is stable, so every
/// returned inlier reprojects within `max_geom_error` and every other frame
/// does not. Returns nullopt without consensus, after `max_iters`
/// non-degenerate samples, or for tracks shorter than 3.
/// Throws MissingCamera when a track frame has no camera.
std::optional<Triangulation> ransac_triangulation(const TrackObservations& track,
                                                  const CameraSet& cams,
                                                  const RansacParams& params);

/// Sphere center from ransac_triangulation; ray = c * median over inliers of
/// d_i * r_i / f_focal, with r_i half the larger box side and d_i the distance
/// from the frame's camera center.
std::optional<SphereEstimate> estimate_orange(const TrackObservations& track, const CameraSet& cams,
                                              double f_focal, double c, const RansacParams& params);

/// Square box [u - r, v - r, 2r, 2r] with r = f_focal * ray / distance.
/// nullopt when the center is behind the camera, degenerate, or the box lies
/// entirely outside `image` (when given).
std::optional<BoundingBox> reproject_sphere(const SphereEstimate& est, const CameraMatrix& cam,
                                            double f_focal,
                                            std::optional<ImageSize> image = std::nullopt);

/// Median; even-sized inputs average the two middle values. Empty -> 0.
double median(std::vector<double> values);

}  // namespace orchard
