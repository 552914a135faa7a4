#include "orchard/simulator.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "orchard/errors.hpp"
#include "orchard/random.hpp"

namespace orchard {

namespace {

void validate(const SceneConfig& cfg) {
  if (cfg.n_spheres < 1) throw InvalidConfig("n_spheres must be >= 1");
  if (cfg.n_frames < 2) throw InvalidConfig("n_frames must be >= 2");
  if (!(cfg.radius_min > 0) || cfg.radius_max < cfg.radius_min) {
    throw InvalidConfig("radius range must be positive and ordered");
  }
  const auto& c = cfg.canopy;
  if (!(c.max.x > c.min.x && c.max.y > c.min.y && c.max.z >= c.min.z)) {
    throw InvalidConfig("canopy box is empty");
  }
  if (!(cfg.intrinsics.focal > 0 && cfg.intrinsics.width > 0 && cfg.intrinsics.height > 0)) {
    throw InvalidConfig("intrinsics must be positive");
  }
  if (cfg.path.sweeps < 1 || !(cfg.path.distance > 0)) throw InvalidConfig("invalid camera path");
  if (cfg.occlusion.min_duration < 1 || cfg.occlusion.max_duration < cfg.occlusion.min_duration ||
      cfg.occlusion.expected_blackouts < 0) {
    throw InvalidConfig("invalid occlusion model");
  }
  if (cfg.occlusion_resolution < 1) throw InvalidConfig("occlusion_resolution must be >= 1");
}

CameraMatrix aimed_camera(const Eigen::Vector3d& center, const Eigen::Vector3d& target,
                          const Intrinsics& k, int frame) {
  const Eigen::Vector3d forward = (target - center).normalized();
  Eigen::Vector3d up(0, 1, 0);
  if (std::abs(forward.dot(up)) > 0.99) up = Eigen::Vector3d(0, 0, 1);
  const Eigen::Vector3d right = (-up).cross(forward).normalized();
  const Eigen::Vector3d down = forward.cross(right);
  Eigen::Matrix3d r;
  r.row(0) = right;
  r.row(1) = down;
  r.row(2) = forward;
  return compose_camera(intrinsics(k.focal, k.focal, k.cx, k.cy), r, -r * center, frame);
}

std::vector<Eigen::Vector3d> sweep_waypoints(const SceneConfig& cfg) {
  const auto& p = cfg.path;
  const Point3 mid = cfg.canopy.centroid();
  const double z = mid.z - p.distance;
  std::vector<Eigen::Vector3d> pts;
  for (int s = 0; s < p.sweeps; ++s) {
    const double y = p.sweeps == 1 ? (p.y_low + p.y_high) / 2
                                   : p.y_low + s * (p.y_high - p.y_low) / (p.sweeps - 1);
    const double from = (s % 2 == 0) ? -p.half_width : p.half_width;
    pts.emplace_back(mid.x + from, mid.y + y, z);
    pts.emplace_back(mid.x - from, mid.y + y, z);
  }
  return pts;
}

// Point at arc length `s` along the polyline.
Eigen::Vector3d along(const std::vector<Eigen::Vector3d>& pts, double s) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = (pts[i + 1] - pts[i]).norm();
    if (s <= len || i + 2 == pts.size()) {
      const double t = len > 0 ? std::clamp(s / len, 0.0, 1.0) : 0.0;
      return pts[i] + t * (pts[i + 1] - pts[i]);
    }
    s -= len;
  }
  return pts.back();
}

struct Projected {
  int sphere = 0;  // index into spheres
  double distance = 0;
  Disk disk;
  bool in_front = false;
};

}  // namespace

double occlusion_fraction(std::span<const Disk> occluders, const Disk& target, int resolution) {
  if (occluders.empty()) return 0.0;
  const double r = target.radius;
  const double step = 2 * r / resolution;
  const double x0 = target.center.u - r;
  const double y0 = target.center.v - r;
  long inside = 0;
  long covered = 0;
  for (int iy = 0; iy < resolution; ++iy) {
    const double y = y0 + (iy + 0.5) * step;
    for (int ix = 0; ix < resolution; ++ix) {
      const double x = x0 + (ix + 0.5) * step;
      const double dx = x - target.center.u;
      const double dy = y - target.center.v;
      if (dx * dx + dy * dy > r * r) continue;
      ++inside;
      for (const Disk& o : occluders) {
        const double ox = x - o.center.u;
        const double oy = y - o.center.v;
        if (ox * ox + oy * oy <= o.radius * o.radius) {
          ++covered;
          break;
        }
      }
    }
  }
  return inside == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(inside);
}

CameraSet camera_path(const SceneConfig& cfg) {
  const Point3 mid = cfg.canopy.centroid();
  const Eigen::Vector3d target = mid.vec();
  CameraSet cams;
  if (cfg.path.kind == PathKind::Arc) {
    for (int f = 0; f < cfg.n_frames; ++f) {
      const double t = -cfg.path.arc_half_angle + 2 * cfg.path.arc_half_angle * f / (cfg.n_frames - 1);
      const Eigen::Vector3d c = target + cfg.path.distance * Eigen::Vector3d(std::sin(t), 0, -std::cos(t));
      cams.emplace(f + 1, aimed_camera(c, target, cfg.intrinsics, f + 1));
    }
    return cams;
  }
  const auto pts = sweep_waypoints(cfg);
  double total = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += (pts[i + 1] - pts[i]).norm();
  for (int f = 0; f < cfg.n_frames; ++f) {
    const Eigen::Vector3d c = along(pts, total * f / (cfg.n_frames - 1));
    cams.emplace(f + 1, aimed_camera(c, target, cfg.intrinsics, f + 1));
  }
  return cams;
}

LabeledBoxes render_boxes(const SceneConfig& cfg, std::span<const Sphere> spheres, const CameraSet& cams,
                          std::span<const Blackout> blackouts, Execution exec) {
  std::vector<const CameraMatrix*> frames;
  for (const auto& [frame, cam] : cams) frames.push_back(&cam);
  const auto& k = cfg.intrinsics;

  std::vector<LabeledBoxes> per_frame(frames.size());
  for_each_index(exec, frames.size(), [&](std::size_t fi) {
    const CameraMatrix& cam = *frames[fi];
    const int frame = cam.frame_index();
    const Eigen::Vector3d eye = camera_center(cam).vec();

    std::vector<Projected> proj(spheres.size());
    for (std::size_t s = 0; s < spheres.size(); ++s) {
      Projected& p = proj[s];
      p.sphere = static_cast<int>(s);
      p.distance = (spheres[s].center.vec() - eye).norm();
      p.in_front = depth(cam, spheres[s].center) > spheres[s].ray;
      if (!p.in_front) continue;
      p.disk = {project(cam, spheres[s].center), k.focal * spheres[s].ray / p.distance};
    }
    std::vector<std::size_t> order(spheres.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return proj[a].distance < proj[b].distance; });

    LabeledBoxes& out = per_frame[fi];
    std::vector<Disk> near;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const Projected& p = proj[order[oi]];
      if (!p.in_front) continue;
      const Sphere& sphere = spheres[static_cast<std::size_t>(p.sphere)];
      const double r = p.disk.radius;
      const BoundingBox box{p.disk.center.u - r, p.disk.center.v - r, 2 * r, 2 * r};
      if (box.x < 0 || box.y < 0 || box.right() > k.width || box.bottom() > k.height) continue;
      const bool hidden = std::any_of(blackouts.begin(), blackouts.end(), [&](const Blackout& b) {
        return b.sphere_id == sphere.id && frame >= b.first_frame && frame <= b.last_frame;
      });
      if (hidden) continue;
      near.clear();
      for (std::size_t oj = 0; oj < oi; ++oj) {
        const Projected& q = proj[order[oj]];
        if (!q.in_front) continue;
        const double gap = std::hypot(q.disk.center.u - p.disk.center.u, q.disk.center.v - p.disk.center.v);
        if (gap < q.disk.radius + r) near.push_back(q.disk);
      }
      const double visibility = 1.0 - occlusion_fraction(near, p.disk, cfg.occlusion_resolution);
      if (visibility > cfg.visibility_threshold) out.push_back({frame, sphere.id, box, visibility});
    }
    std::sort(out.begin(), out.end(),
              [](const LabeledBox& a, const LabeledBox& b) { return a.track_id < b.track_id; });
  });

  LabeledBoxes all;
  for (auto& f : per_frame) all.insert(all.end(), f.begin(), f.end());
  return all;
}

GroundTruthScene generate_scene(const SceneConfig& cfg, Execution exec) {
  validate(cfg);
  Rng rng(cfg.seed);
  GroundTruthScene scene;
  scene.config = cfg;

  const Box3& box = cfg.canopy;
  int attempts = 0;
  while (static_cast<int>(scene.spheres.size()) < cfg.n_spheres) {
    if (++attempts > cfg.max_placement_attempts) {
      throw InfeasiblePlacement("placed " + std::to_string(scene.spheres.size()) + " of " +
                                std::to_string(cfg.n_spheres) + " spheres");
    }
    const double ray = uniform(rng, cfg.radius_min, cfg.radius_max);
    const Point3 c{uniform(rng, box.min.x, box.max.x), uniform(rng, box.min.y, box.max.y),
                   uniform(rng, box.min.z, box.max.z)};
    const bool clash = std::any_of(scene.spheres.begin(), scene.spheres.end(), [&](const Sphere& s) {
      return (s.center.vec() - c.vec()).norm() < s.ray + ray;
    });
    if (clash) continue;
    scene.spheres.push_back({static_cast<int>(scene.spheres.size()) + 1, c, ray});
  }

  for (const Sphere& s : scene.spheres) {
    const int n = poisson(rng, cfg.occlusion.expected_blackouts);
    for (int i = 0; i < n; ++i) {
      const auto start = static_cast<int>(uniform_int(rng, 1, cfg.n_frames));
      const auto len =
          static_cast<int>(uniform_int(rng, cfg.occlusion.min_duration, cfg.occlusion.max_duration));
      scene.blackouts.push_back({s.id, start, start + len - 1});
    }
  }

  scene.cams = camera_path(cfg);
  scene.gt_boxes = render_boxes(cfg, scene.spheres, scene.cams, scene.blackouts, exec);
  return scene;
}

std::vector<FrameDetections> frames_from_labels(const LabeledBoxes& boxes, int first, int last) {
  std::vector<FrameDetections> out;
  if (last < first) return out;
  out.resize(static_cast<std::size_t>(last - first + 1));
  for (int f = first; f <= last; ++f) out[static_cast<std::size_t>(f - first)].frame_index = f;
  for (const LabeledBox& b : boxes) {
    if (b.frame < first || b.frame > last) continue;
    out[static_cast<std::size_t>(b.frame - first)].boxes.push_back(b.box);
  }
  return out;
}

int distinct_ids(const LabeledBoxes& boxes) {
  std::set<int> ids;
  for (const auto& b : boxes) ids.insert(b.track_id);
  return static_cast<int>(ids.size());
}

}  // namespace orchard
