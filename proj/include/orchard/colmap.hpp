#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orchard/sphere.hpp"

namespace orchard {

struct ColmapIntrinsics {
  int camera_id = 1;
  std::string model;
  int width = 0;
  int height = 0;
  std::vector<double> params;
};

struct ColmapPose {
  int image_id = 1;
  Eigen::Vector4d rotation{1, 0, 0, 0};  // qw, qx, qy, qz
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();
  int camera_id = 1;
  std::string name;
};

/// cameras.txt. Throws ParseError.
std::map<int, ColmapIntrinsics> read_colmap_cameras(std::istream& in);
/// images.txt; the 2-D point line after every image line is skipped.
std::vector<ColmapPose> read_colmap_images(std::istream& in);

/// K for SIMPLE_PINHOLE, PINHOLE and SIMPLE_RADIAL. The radial term is
/// dropped with a message in `warnings`. Throws UnknownCameraModel.
Eigen::Matrix3d intrinsics_matrix(const ColmapIntrinsics& cam, std::vector<std::string>* warnings = nullptr);

/// Rotation matrix of a unit quaternion (qw, qx, qy, qz). Inputs within 1e-3
/// of unit norm are renormalized, others throw UnnormalizedRotation.
Eigen::Matrix3d quaternion_to_rotation(const Eigen::Vector4d& q);
Eigen::Vector4d rotation_to_quaternion(const Eigen::Matrix3d& r);

inline constexpr const char* kDefaultFramePattern = R"((\d+)\D*$)";

/// Frame index from an image name: first capture group of `pattern` searched
/// in the file stem. The default takes the trailing integer.
std::optional<int> frame_from_name(const std::string& name, const std::string& pattern = kDefaultFramePattern);

/// Frame -> P = K [R | t]. Throws MissingIntrinsics for an image whose camera
/// is not listed and ParseError for names without a frame index or repeated
/// frames.
CameraSet colmap_cameras(const std::map<int, ColmapIntrinsics>& cameras, const std::vector<ColmapPose>& images,
                         const std::string& pattern = kDefaultFramePattern,
                         std::vector<std::string>* warnings = nullptr);

CameraSet read_colmap(const std::filesystem::path& cameras_txt, const std::filesystem::path& images_txt,
                      const std::string& pattern = kDefaultFramePattern,
                      std::vector<std::string>* warnings = nullptr);

/// Writes one PINHOLE camera and one image per frame named frame_NNNNNN.png.
/// R and t are recovered as K^-1 P, so every P must have the form K [R | t].
void write_colmap(const std::filesystem::path& cameras_txt, const std::filesystem::path& images_txt,
                  const CameraSet& cams, const Eigen::Matrix3d& k, int width, int height);

}  // namespace orchard
