#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

namespace orchard {

using Mat34 = Eigen::Matrix<double, 3, 4>;

struct Point3 {
  double x = 0, y = 0, z = 0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static Point3 from(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
  friend bool operator==(const Point3&, const Point3&) = default;
};

struct Pixel {
  double u = 0, v = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

/// Axis-aligned pixel rectangle, top-left corner plus extent.
struct BoundingBox {
  double x = 0, y = 0, width = 0, height = 0;

  double right() const { return x + width; }
  double bottom() const { return y + height; }
  double area() const { return width * height; }
  bool valid() const { return width > 0 && height > 0; }
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// 3x4 projective camera P = [M | p4] attached to one frame.
class CameraMatrix {
 public:
  CameraMatrix() : p_(Mat34::Zero()) { p_.leftCols<3>().setIdentity(); }
  /// Throws InputError on non-finite entries.
  explicit CameraMatrix(const Mat34& p, int frame_index = 0);

  const Mat34& p() const { return p_; }
  int frame_index() const { return frame_index_; }

  /// Left 3x3 block.
  Eigen::Matrix3d m() const { return p_.leftCols<3>(); }

 private:
  Mat34 p_;
  int frame_index_ = 0;
};

struct Observation {
  Pixel pixel;
  CameraMatrix camera;
};

/// Dehomogenized projection of `point`. Throws DegenerateProjection when the
/// homogeneous depth component is below 1e-12 in magnitude.
Pixel project(const CameraMatrix& cam, const Point3& point);

/// Signed depth of `point` in front of the camera (positive = visible side),
/// using the sign of det(M) so it is valid for any scaling of P.
double depth(const CameraMatrix& cam, const Point3& point);

/// C = -M^{-1} p4. Throws SingularCamera when cond(M) > 1e12.
Point3 camera_center(const CameraMatrix& cam);

/// Linear triangulation from >= 2 views. Each equation row is scaled to unit
/// norm before the SVD. Returns nullopt when the system is rank deficient or
/// the solution lies at infinity. Throws InsufficientViews for < 2 views.
std::optional<Point3> dlt_triangulate(std::span<const Observation> observations);

double reprojection_error(const CameraMatrix& cam, const Point3& point, const Pixel& centroid);

/// Geometric center of the box.
Pixel box_centroid(const BoundingBox& b);

/// Intersection over union. Boxes sharing only an edge have IoU 0.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Builds K = [[fx,0,cx],[0,fy,cy],[0,0,1]].
Eigen::Matrix3d intrinsics(double fx, double fy, double cx, double cy);

/// P = K [R | t].
CameraMatrix compose_camera(const Eigen::Matrix3d& k, const Eigen::Matrix3d& r,
                            const Eigen::Vector3d& t, int frame_index = 0);

}  // namespace orchard
