#pragma once

#include <filesystem>

#include "json.hpp"
#include "orchard/simulator.hpp"

namespace orchard {

/// Files of a simulated scene directory.
struct SceneFiles {
  std::filesystem::path gt;       // MOT16 ground truth with visibility
  std::filesystem::path cameras;  // COLMAP cameras.txt
  std::filesystem::path images;   // COLMAP images.txt
  std::filesystem::path json;     // config, spheres, blackouts, CbyT-GT
};

SceneFiles scene_files(const std::filesystem::path& dir);

nlohmann::json to_json(const SceneConfig& cfg);
/// Keys left out keep their defaults. Throws InvalidConfig on unknown keys or
/// wrongly typed values.
SceneConfig scene_config_from_json(const nlohmann::json& j);
SceneConfig read_scene_config(const std::filesystem::path& path);

/// Creates `dir` if needed and writes every file of the scene.
void write_scene(const std::filesystem::path& dir, const GroundTruthScene& scene);

}  // namespace orchard
