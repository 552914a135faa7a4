#include "orchard/colmap.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <regex>
#include <sstream>

#include "orchard/errors.hpp"

namespace orchard {

namespace {

bool skip(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

template <class T>
T take(std::istringstream& in, std::size_t line, const char* what) {
  T v{};
  if (!(in >> v)) throw ParseError("line " + std::to_string(line) + ": missing or bad " + what);
  return v;
}

std::ifstream open(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw ParseError("cannot open " + p.string());
  return in;
}

std::size_t expected_params(const std::string& model) {
  if (model == "SIMPLE_PINHOLE") return 3;
  if (model == "PINHOLE") return 4;
  if (model == "SIMPLE_RADIAL") return 4;
  throw UnknownCameraModel("camera model " + model + " is not supported");
}

}  // namespace

std::map<int, ColmapIntrinsics> read_colmap_cameras(std::istream& in) {
  std::map<int, ColmapIntrinsics> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    std::istringstream s(line);
    ColmapIntrinsics c;
    c.camera_id = take<int>(s, n, "camera id");
    c.model = take<std::string>(s, n, "model");
    c.width = take<int>(s, n, "width");
    c.height = take<int>(s, n, "height");
    double v = 0;
    while (s >> v) c.params.push_back(v);
    if (!s.eof()) throw ParseError("line " + std::to_string(n) + ": bad camera parameter");
    if (c.params.size() != expected_params(c.model)) {
      throw ParseError("line " + std::to_string(n) + ": " + c.model + " takes " +
                       std::to_string(expected_params(c.model)) + " parameters");
    }
    const std::size_t focals = c.model == "PINHOLE" ? 2 : 1;
    for (std::size_t i = 0; i < focals; ++i) {
      if (!(c.params[i] > 0)) throw ParseError("line " + std::to_string(n) + ": focal length must be positive");
    }
    if (c.width <= 0 || c.height <= 0) throw ParseError("line " + std::to_string(n) + ": image size must be positive");
    if (!out.emplace(c.camera_id, c).second) {
      throw ParseError("line " + std::to_string(n) + ": camera " + std::to_string(c.camera_id) + " listed twice");
    }
  }
  return out;
}

std::vector<ColmapPose> read_colmap_images(std::istream& in) {
  std::vector<ColmapPose> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (skip(line)) continue;
    std::istringstream s(line);
    ColmapPose p;
    p.image_id = take<int>(s, n, "image id");
    for (int i = 0; i < 4; ++i) p.rotation[i] = take<double>(s, n, "quaternion");
    for (int i = 0; i < 3; ++i) p.translation[i] = take<double>(s, n, "translation");
    p.camera_id = take<int>(s, n, "camera id");
    std::getline(s >> std::ws, p.name);
    while (!p.name.empty() && (p.name.back() == '\r' || p.name.back() == ' ')) p.name.pop_back();
    if (p.name.empty()) throw ParseError("line " + std::to_string(n) + ": missing image name");
    out.push_back(std::move(p));
    // 2-D points line, possibly empty.
    if (std::getline(in, line)) ++n;
  }
  return out;
}

Eigen::Matrix3d intrinsics_matrix(const ColmapIntrinsics& cam, std::vector<std::string>* warnings) {
  const auto& p = cam.params;
  if (p.size() != expected_params(cam.model)) throw ParseError("camera " + std::to_string(cam.camera_id) + ": wrong parameter count");
  if (cam.model == "PINHOLE") return intrinsics(p[0], p[1], p[2], p[3]);
  if (cam.model == "SIMPLE_RADIAL" && warnings) {
    warnings->push_back("camera " + std::to_string(cam.camera_id) + ": SIMPLE_RADIAL distortion ignored");
  }
  return intrinsics(p[0], p[0], p[1], p[2]);
}

Eigen::Matrix3d quaternion_to_rotation(const Eigen::Vector4d& q) {
  const double norm = q.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > 1e-3) {
    throw UnnormalizedRotation("quaternion norm " + std::to_string(norm));
  }
  const Eigen::Quaterniond u(q[0] / norm, q[1] / norm, q[2] / norm, q[3] / norm);
  return u.toRotationMatrix();
}

Eigen::Vector4d rotation_to_quaternion(const Eigen::Matrix3d& r) {
  Eigen::Quaterniond q(r);
  q.normalize();
  // COLMAP stores qw >= 0.
  if (q.w() < 0) q.coeffs() *= -1;
  return {q.w(), q.x(), q.y(), q.z()};
}

std::optional<int> frame_from_name(const std::string& name, const std::string& pattern) {
  const std::string stem = std::filesystem::path(name).stem().string();
  const std::regex re(pattern);
  std::smatch m;
  if (!std::regex_search(stem, m, re) || m.size() < 2 || !m[1].matched) return std::nullopt;
  try {
    return std::stoi(m[1].str());
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

CameraSet colmap_cameras(const std::map<int, ColmapIntrinsics>& cameras, const std::vector<ColmapPose>& images,
                         const std::string& pattern, std::vector<std::string>* warnings) {
  std::map<int, Eigen::Matrix3d> ks;
  for (const auto& [id, cam] : cameras) ks.emplace(id, intrinsics_matrix(cam, warnings));
  CameraSet out;
  for (const auto& img : images) {
    const auto k = ks.find(img.camera_id);
    if (k == ks.end()) {
      throw MissingIntrinsics("image " + img.name + " refers to camera " + std::to_string(img.camera_id));
    }
    const auto frame = frame_from_name(img.name, pattern);
    if (!frame) throw ParseError("no frame index in image name " + img.name);
    const Eigen::Matrix3d r = quaternion_to_rotation(img.rotation);
    if (!out.emplace(*frame, compose_camera(k->second, r, img.translation, *frame)).second) {
      throw ParseError("frame " + std::to_string(*frame) + " appears twice (" + img.name + ")");
    }
  }
  return out;
}

CameraSet read_colmap(const std::filesystem::path& cameras_txt, const std::filesystem::path& images_txt,
                      const std::string& pattern, std::vector<std::string>* warnings) {
  auto cin = open(cameras_txt);
  auto iin = open(images_txt);
  return colmap_cameras(read_colmap_cameras(cin), read_colmap_images(iin), pattern, warnings);
}

void write_colmap(const std::filesystem::path& cameras_txt, const std::filesystem::path& images_txt,
                  const CameraSet& cams, const Eigen::Matrix3d& k, int width, int height) {
  std::ofstream c(cameras_txt);
  std::ofstream i(images_txt);
  if (!c || !i) throw InputError("cannot write COLMAP files next to " + cameras_txt.string());
  char buf[256];
  c << "# Camera list with one line of data per camera:\n"
    << "#   CAMERA_ID, MODEL, WIDTH, HEIGHT, PARAMS[]\n";
  std::snprintf(buf, sizeof buf, "1 PINHOLE %d %d %.17g %.17g %.17g %.17g\n", width, height, k(0, 0), k(1, 1),
                k(0, 2), k(1, 2));
  c << buf;
  i << "# Image list with two lines of data per image:\n"
    << "#   IMAGE_ID, QW, QX, QY, QZ, TX, TY, TZ, CAMERA_ID, NAME\n"
    << "#   POINTS2D[] as (X, Y, POINT3D_ID)\n";
  const Eigen::Matrix3d k_inv = k.inverse();
  int image_id = 0;
  for (const auto& [frame, cam] : cams) {
    const Eigen::Matrix<double, 3, 4> rt = k_inv * cam.p();
    const Eigen::Vector4d q = rotation_to_quaternion(rt.leftCols<3>());
    const Eigen::Vector3d t = rt.col(3);
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g 1 frame_%06d.png\n", ++image_id,
                  q[0], q[1], q[2], q[3], t[0], t[1], t[2], frame);
    i << buf << '\n';
  }
}

}  // namespace orchard
