#include "orchard/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orchard/errors.hpp"

namespace orchard {

namespace {

constexpr int kMaxRefits = 20;

struct PreparedTrack {
  std::vector<int> frames;
  std::vector<Pixel> centroids;
  std::vector<const CameraMatrix*> cams;
};

PreparedTrack prepare(const TrackObservations& track, const CameraSet& cams) {
  PreparedTrack out;
  out.frames.reserve(track.size());
  for (const auto& [frame, box] : track) {
    const auto it = cams.find(frame);
    if (it == cams.end()) {
      throw MissingCamera("no camera matrix for frame " + std::to_string(frame));
    }
    out.frames.push_back(frame);
    out.centroids.push_back(box_centroid(box));
    out.cams.push_back(&it->second);
  }
  return out;
}

std::optional<Point3> triangulate(const PreparedTrack& t, const std::vector<std::size_t>& idx) {
  std::vector<Observation> obs;
  obs.reserve(idx.size());
  for (std::size_t i : idx) obs.push_back({t.centroids[i], *t.cams[i]});
  return dlt_triangulate(obs);
}

std::vector<std::size_t> inliers_of(const PreparedTrack& t, const Point3& x, double max_error) {
  std::vector<std::size_t> out;
  const Eigen::Vector4d xh(x.x, x.y, x.z, 1.0);
  for (std::size_t i = 0; i < t.frames.size(); ++i) {
    const Eigen::Vector3d h = t.cams[i]->p() * xh;
    if (std::abs(h.z()) < 1e-12) continue;
    const double du = h.x() / h.z() - t.centroids[i].u;
    const double dv = h.y() / h.z() - t.centroids[i].v;
    if (std::hypot(du, dv) <= max_error) out.push_back(i);
  }
  return out;
}

}  // namespace

std::optional<Triangulation> ransac_triangulation(const TrackObservations& track,
                                                  const CameraSet& cams,
                                                  const RansacParams& params) {
  const PreparedTrack t = prepare(track, cams);
  const std::size_t n = t.frames.size();
  if (n < 3) return std::nullopt;
  auto enough = [&](std::size_t count) {
    return static_cast<double>(count) / static_cast<double>(n) >= params.inliers_ratio;
  };

  // Refit on the consensus set until the inlier set is a fixed point.
  auto refine = [&](std::vector<std::size_t> inliers) -> std::optional<Triangulation> {
    for (int pass = 0; pass < kMaxRefits; ++pass) {
      const auto x = triangulate(t, inliers);
      if (!x) return std::nullopt;
      auto next = inliers_of(t, *x, params.max_geom_error);
      if (next.size() < 2 || !enough(next.size())) return std::nullopt;
      if (next == inliers || pass + 1 == kMaxRefits) {
        Triangulation out{*x, {}};
        for (std::size_t i : next) out.inlier_frames.push_back(t.frames[i]);
        return out;
      }
      inliers = std::move(next);
    }
    return std::nullopt;
  };

  int iters = 1;
  std::vector<std::size_t> sample(3);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        sample = {i, j, k};
        const auto xs = triangulate(t, sample);
        if (!xs) continue;
        auto inliers = inliers_of(t, *xs, params.max_geom_error);
        if (enough(inliers.size()) && inliers.size() >= 2) {
          if (auto result = refine(std::move(inliers))) return result;
        }
        if (++iters > params.max_iters) return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::optional<SphereEstimate> estimate_orange(const TrackObservations& track, const CameraSet& cams,
                                              double f_focal, double c, const RansacParams& params) {
  auto tri = ransac_triangulation(track, cams, params);
  if (!tri) return std::nullopt;
  const Eigen::Vector3d x = tri->center.vec();
  std::vector<double> rays;
  rays.reserve(tri->inlier_frames.size());
  for (int frame : tri->inlier_frames) {
    const BoundingBox& box = track.at(frame);
    const double r2d = std::max(box.height, box.width) / 2.0;
    const double d = (x - camera_center(cams.at(frame)).vec()).norm();
    rays.push_back(d * r2d / f_focal);
  }
  const double ray = c * median(std::move(rays));
  if (!(ray > 0) || !std::isfinite(ray)) return std::nullopt;
  return SphereEstimate{tri->center, ray, std::move(tri->inlier_frames)};
}

std::optional<BoundingBox> reproject_sphere(const SphereEstimate& est, const CameraMatrix& cam,
                                            double f_focal, std::optional<ImageSize> image) {
  if (depth(cam, est.center) <= 0) return std::nullopt;
  const Eigen::Vector3d h = cam.p() * Eigen::Vector4d(est.center.x, est.center.y, est.center.z, 1.0);
  if (std::abs(h.z()) < 1e-12) return std::nullopt;
  const double d = (est.center.vec() - camera_center(cam).vec()).norm();
  if (!(d > 0)) return std::nullopt;
  const double r = f_focal * est.ray / d;
  const BoundingBox box{h.x() / h.z() - r, h.y() / h.z() - r, 2 * r, 2 * r};
  if (image && (box.right() <= 0 || box.bottom() <= 0 || box.x >= image->width ||
                box.y >= image->height)) {
    return std::nullopt;
  }
  return box;
}

}  // namespace orchard
