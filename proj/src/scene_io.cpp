#include "orchard/scene_io.hpp"

#include <fstream>

#include "orchard/colmap.hpp"
#include "orchard/errors.hpp"
#include "orchard/mot16.hpp"

namespace orchard {

using nlohmann::json;

namespace {

json point(const Point3& p) { return json::array({p.x, p.y, p.z}); }

Point3 point_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidConfig("expected [x, y, z], got " + j.dump());
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// Copies known keys of `j` into the fields named by `fields`; rejects others.
template <class F>
void read_object(const json& j, const char* what, F&& fields) {
  if (!j.is_object()) throw InvalidConfig(std::string(what) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    if (!fields(key, value)) throw InvalidConfig(std::string("unknown key '") + key + "' in " + what);
  }
}

}  // namespace

SceneFiles scene_files(const std::filesystem::path& dir) {
  return {dir / "gt.txt", dir / "cameras.txt", dir / "images.txt", dir / "scene.json"};
}

json to_json(const SceneConfig& cfg) {
  const auto& p = cfg.path;
  const auto& k = cfg.intrinsics;
  const auto& o = cfg.occlusion;
  return {
      {"n_spheres", cfg.n_spheres},
      {"radius_min", cfg.radius_min},
      {"radius_max", cfg.radius_max},
      {"canopy", {{"min", point(cfg.canopy.min)}, {"max", point(cfg.canopy.max)}}},
      {"path",
       {{"kind", p.kind == PathKind::Sweep ? "sweep" : "arc"},
        {"sweeps", p.sweeps},
        {"half_width", p.half_width},
        {"y_low", p.y_low},
        {"y_high", p.y_high},
        {"distance", p.distance},
        {"arc_half_angle", p.arc_half_angle}}},
      {"n_frames", cfg.n_frames},
      {"intrinsics",
       {{"focal", k.focal}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}}},
      {"occlusion",
       {{"expected_blackouts", o.expected_blackouts},
        {"min_duration", o.min_duration},
        {"max_duration", o.max_duration}}},
      {"seed", cfg.seed},
      {"visibility_threshold", cfg.visibility_threshold},
      {"occlusion_resolution", cfg.occlusion_resolution},
      {"max_placement_attempts", cfg.max_placement_attempts},
  };
}

SceneConfig scene_config_from_json(const json& j) {
  SceneConfig cfg;
  try {
    read_object(j, "scene config", [&](const std::string& key, const json& v) {
      if (key == "n_spheres") v.get_to(cfg.n_spheres);
      else if (key == "radius_min") v.get_to(cfg.radius_min);
      else if (key == "radius_max") v.get_to(cfg.radius_max);
      else if (key == "n_frames") v.get_to(cfg.n_frames);
      else if (key == "seed") v.get_to(cfg.seed);
      else if (key == "visibility_threshold") v.get_to(cfg.visibility_threshold);
      else if (key == "occlusion_resolution") v.get_to(cfg.occlusion_resolution);
      else if (key == "max_placement_attempts") v.get_to(cfg.max_placement_attempts);
      else if (key == "canopy") {
        read_object(v, "canopy", [&](const std::string& k, const json& x) {
          if (k == "min") cfg.canopy.min = point_from(x);
          else if (k == "max") cfg.canopy.max = point_from(x);
          else return false;
          return true;
        });
      } else if (key == "path") {
        auto& p = cfg.path;
        read_object(v, "path", [&](const std::string& k, const json& x) {
          if (k == "kind") {
            const auto s = x.get<std::string>();
            if (s == "sweep") p.kind = PathKind::Sweep;
            else if (s == "arc") p.kind = PathKind::Arc;
            else throw InvalidConfig("path kind must be sweep or arc, got " + s);
          } else if (k == "sweeps") x.get_to(p.sweeps);
          else if (k == "half_width") x.get_to(p.half_width);
          else if (k == "y_low") x.get_to(p.y_low);
          else if (k == "y_high") x.get_to(p.y_high);
          else if (k == "distance") x.get_to(p.distance);
          else if (k == "arc_half_angle") x.get_to(p.arc_half_angle);
          else return false;
          return true;
        });
      } else if (key == "intrinsics") {
        auto& in = cfg.intrinsics;
        read_object(v, "intrinsics", [&](const std::string& k, const json& x) {
          if (k == "focal") x.get_to(in.focal);
          else if (k == "cx") x.get_to(in.cx);
          else if (k == "cy") x.get_to(in.cy);
          else if (k == "width") x.get_to(in.width);
          else if (k == "height") x.get_to(in.height);
          else return false;
          return true;
        });
      } else if (key == "occlusion") {
        auto& o = cfg.occlusion;
        read_object(v, "occlusion", [&](const std::string& k, const json& x) {
          if (k == "expected_blackouts") x.get_to(o.expected_blackouts);
          else if (k == "min_duration") x.get_to(o.min_duration);
          else if (k == "max_duration") x.get_to(o.max_duration);
          else return false;
          return true;
        });
      } else {
        return false;
      }
      return true;
    });
  } catch (const json::exception& e) {
    throw InvalidConfig(std::string("scene config: ") + e.what());
  }
  return cfg;
}

SceneConfig read_scene_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  // A scene.json written by write_scene nests the config.
  if (j.is_object() && j.contains("config") && j.contains("spheres")) return scene_config_from_json(j["config"]);
  return scene_config_from_json(j);
}

void write_scene(const std::filesystem::path& dir, const GroundTruthScene& scene) {
  std::filesystem::create_directories(dir);
  const SceneFiles files = scene_files(dir);
  write_mot16(files.gt, to_rows(scene.gt_boxes));
  const auto& k = scene.config.intrinsics;
  write_colmap(files.cameras, files.images, scene.cams, intrinsics(k.focal, k.focal, k.cx, k.cy),
               static_cast<int>(k.width), static_cast<int>(k.height));
  json spheres = json::array();
  for (const auto& s : scene.spheres) spheres.push_back({{"id", s.id}, {"center", point(s.center)}, {"ray", s.ray}});
  json blackouts = json::array();
  for (const auto& b : scene.blackouts) {
    blackouts.push_back({{"sphere_id", b.sphere_id}, {"first_frame", b.first_frame}, {"last_frame", b.last_frame}});
  }
  const json out{{"config", to_json(scene.config)},
                 {"spheres", spheres},
                 {"blackouts", blackouts},
                 {"cbyt_gt", distinct_ids(scene.gt_boxes)}};
  std::ofstream f(files.json);
  if (!f) throw InputError("cannot write " + files.json.string());
  f << out.dump(2) << '\n';
}

}  // namespace orchard
