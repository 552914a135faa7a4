#include "orchard/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

#include "orchard/errors.hpp"

namespace orchard {

namespace {
constexpr double kMinDepth = 1e-12;
constexpr double kMaxCondition = 1e12;
constexpr double kRankTolerance = 1e-10;

Eigen::Vector3d homogeneous_image(const CameraMatrix& cam, const Point3& point) {
  return cam.p() * Eigen::Vector4d(point.x, point.y, point.z, 1.0);
}
}  // namespace

CameraMatrix::CameraMatrix(const Mat34& p, int frame_index) : p_(p), frame_index_(frame_index) {
  if (!p.allFinite()) {
    throw InputError("camera matrix for frame " + std::to_string(frame_index) +
                     " has non-finite entries");
  }
}

Pixel project(const CameraMatrix& cam, const Point3& point) {
  const Eigen::Vector3d h = homogeneous_image(cam, point);
  if (std::abs(h.z()) < kMinDepth) {
    throw DegenerateProjection("point lies on the principal plane of frame " +
                               std::to_string(cam.frame_index()));
  }
  return {h.x() / h.z(), h.y() / h.z()};
}

double depth(const CameraMatrix& cam, const Point3& point) {
  const double w = homogeneous_image(cam, point).z();
  const Eigen::Matrix3d m = cam.m();
  const double det = m.determinant();
  const double scale = m.row(2).norm();
  if (scale == 0) return 0;
  return (det < 0 ? -w : w) / scale;
}

Point3 camera_center(const CameraMatrix& cam) {
  const Eigen::Matrix3d m = cam.m();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
  const Eigen::Vector3d s = svd.singularValues();
  if (!(s(2) > 0) || s(0) / s(2) > kMaxCondition) {
    throw SingularCamera("left 3x3 block of frame " + std::to_string(cam.frame_index()) +
                         " is singular or ill-conditioned");
  }
  const Eigen::Vector3d c = -m.partialPivLu().solve(cam.p().col(3));
  return Point3::from(c);
}

std::optional<Point3> dlt_triangulate(std::span<const Observation> observations) {
  if (observations.size() < 2) {
    throw InsufficientViews("triangulation needs at least 2 views, got " +
                            std::to_string(observations.size()));
  }
  Eigen::MatrixXd a(2 * observations.size(), 4);
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& p = observations[i].camera.p();
    const Pixel& px = observations[i].pixel;
    Eigen::RowVector4d r0 = px.u * p.row(2) - p.row(0);
    Eigen::RowVector4d r1 = px.v * p.row(2) - p.row(1);
    const double n0 = r0.norm();
    const double n1 = r1.norm();
    if (n0 > 0) r0 /= n0;
    if (n1 > 0) r1 /= n1;
    a.row(2 * i) = r0;
    a.row(2 * i + 1) = r1;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd s = svd.singularValues();
  // A one-dimensional null space needs three clearly nonzero singular values.
  if (s.size() < 4 || !(s(0) > 0) || s(2) <= kRankTolerance * s(0)) return std::nullopt;
  const Eigen::Vector4d x = svd.matrixV().col(3);
  if (std::abs(x(3)) <= kMinDepth * x.head<3>().norm() || x(3) == 0) return std::nullopt;
  const Eigen::Vector3d point = x.head<3>() / x(3);
  if (!point.allFinite()) return std::nullopt;
  return Point3::from(point);
}

double reprojection_error(const CameraMatrix& cam, const Point3& point, const Pixel& centroid) {
  const Pixel px = project(cam, point);
  return std::hypot(px.u - centroid.u, px.v - centroid.v);
}

Pixel box_centroid(const BoundingBox& b) { return {b.x + b.width / 2, b.y + b.height / 2}; }

double iou(const BoundingBox& a, const BoundingBox& b) {
  if (a == b) return a.valid() ? 1.0 : 0.0;
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Eigen::Matrix3d intrinsics(double fx, double fy, double cx, double cy) {
  Eigen::Matrix3d k;
  k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
  return k;
}

CameraMatrix compose_camera(const Eigen::Matrix3d& k, const Eigen::Matrix3d& r,
                            const Eigen::Vector3d& t, int frame_index) {
  Mat34 rt;
  rt.leftCols<3>() = r;
  rt.col(3) = t;
  return CameraMatrix(k * rt, frame_index);
}

}  // namespace orchard
