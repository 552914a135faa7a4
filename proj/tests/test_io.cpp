#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "orchard/colmap.hpp"
#include "orchard/detections.hpp"
#include "orchard/errors.hpp"
#include "orchard/mot16.hpp"
#include "orchard/scene_io.hpp"

using namespace orchard;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("orchard_test_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_string(std::span<const Mot16Row> rows) {
  std::ostringstream out;
  write_mot16(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("mot16 single row") {
  std::istringstream in("1,1,10,20,30,40,1,1,1.0\n");
  const auto rows = read_mot16(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].frame == 1);
  CHECK(rows[0].id == 1);
  CHECK(rows[0].left == 10);
  CHECK(rows[0].height == 40);
  CHECK(rows[0].visibility == 1.0);
  CHECK(write_string(rows) == "1,1,10,20,30,40,1,1,1\n");
}

TEST_CASE("mot16 field variants and errors") {
  std::istringstream seven("3,-1,1.5,2.5,10,12,0.8\n");
  const auto a = read_mot16(seven);
  REQUIRE(a.size() == 1);
  CHECK(a[0].conf == 0.8);
  CHECK(a[0].cls == 1);
  std::istringstream det("2,-1,5,6,7,8,0.9,-1,-1,-1\r\n\n");
  const auto b = read_mot16(det);
  REQUIRE(b.size() == 1);
  CHECK(b[0].visibility == 1.0);
  CHECK(b[0].conf == 0.9);

  std::istringstream neg("1,1,10,20,-5,40,1,1,1\n");
  CHECK_THROWS_AS(read_mot16(neg), NegativeDimensions);
  std::istringstream short_row("1,1,10,20,5\n");
  CHECK_THROWS_WITH_AS(read_mot16(short_row), doctest::Contains("line 1"), ParseError);
  std::istringstream word("1,1,10,20,5,5,1,1,1\n1,x,1,1,1,1,1,1,1\n");
  CHECK_THROWS_WITH_AS(read_mot16(word), doctest::Contains("line 2"), ParseError);
  std::istringstream vis("1,1,10,20,5,5,1,1,1.5\n");
  CHECK_THROWS_AS(read_mot16(vis), ParseError);
  std::istringstream frame0("0,1,10,20,5,5,1,1,1\n");
  CHECK_THROWS_AS(read_mot16(frame0), ParseError);
}

TEST_CASE("mot16 1000-row round trip is byte identical") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0, 1280);
  std::uniform_real_distribution<double> size(1, 90);
  std::uniform_real_distribution<double> unit(0, 1);
  std::vector<Mot16Row> rows;
  for (int i = 0; i < 1000; ++i) {
    rows.push_back({1 + i / 20, i % 20 + 1, pos(rng), pos(rng), size(rng), size(rng), unit(rng), 1, unit(rng)});
  }
  const std::string first = write_string(rows);
  std::istringstream in(first);
  const auto parsed = read_mot16(in);
  CHECK(parsed.size() == 1000);
  CHECK(write_string(parsed) == first);

  // Rows already at 6 significant digits survive read(write(rows)) unchanged.
  std::istringstream again(write_string(parsed));
  CHECK(read_mot16(again) == parsed);

  const fs::path file = scratch_dir("mot") / "rows.txt";
  write_mot16(file, parsed);
  CHECK(read_mot16(file) == parsed);
  CHECK_THROWS_AS(read_mot16(file.parent_path() / "missing.txt"), ParseError);
}

TEST_CASE("mot16 writer orders by frame then id") {
  const std::vector<Mot16Row> rows{{2, 1, 0, 0, 1, 1, 1, 1, 1}, {1, 5, 0, 0, 1, 1, 1, 1, 1}, {1, 2, 0, 0, 1, 1, 1, 1, 1}};
  CHECK(write_string(rows) == "1,2,0,0,1,1,1,1,1\n1,5,0,0,1,1,1,1,1\n2,1,0,0,1,1,1,1,1\n");
}

TEST_CASE("mot16 conversions") {
  const LabeledBoxes boxes{{1, 3, {1, 2, 3, 4}, 0.25}, {4, 3, {5, 6, 7, 8}, 1.0}};
  CHECK(to_labeled(to_rows(boxes)) == boxes);
  const auto dets = to_detections(to_rows(boxes));
  REQUIRE(dets.size() == 2);
  CHECK(dets[1].frame_index == 4);
  CHECK(dets[1].boxes.front() == BoundingBox{5, 6, 7, 8});
  const auto rows = detection_rows(dets);
  CHECK(rows.size() == 2);
  CHECK(rows[0].id == -1);
}

TEST_CASE("colmap identity camera") {
  std::istringstream cams("# comment\n1 SIMPLE_PINHOLE 100 100 1 0 0\n");
  std::istringstream imgs("1 1 0 0 0 0 0 0 1 img_0007.jpg\n\n");
  const CameraSet set = colmap_cameras(read_colmap_cameras(cams), read_colmap_images(imgs));
  REQUIRE(set.size() == 1);
  REQUIRE(set.contains(7));
  Mat34 expected = Mat34::Zero();
  expected.leftCols<3>().setIdentity();
  CHECK(set.at(7).p() == expected);
  CHECK(set.at(7).frame_index() == 7);
}

TEST_CASE("colmap quaternion to rotation") {
  const double h = std::sqrt(0.5);
  const Eigen::Matrix3d r = quaternion_to_rotation({h, 0, 0, h});
  // 90 degrees about z: x axis to y axis, y axis to -x axis.
  CHECK((r.col(0) - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
  CHECK((r.col(1) - Eigen::Vector3d(-1, 0, 0)).norm() < 1e-12);
  CHECK((r.col(2) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-12);
  CHECK_THROWS_AS(quaternion_to_rotation({1.01, 0, 0, 0}), UnnormalizedRotation);
  CHECK_NOTHROW(quaternion_to_rotation({1.0005, 0, 0, 0}));

  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector4d q = Eigen::Vector4d(n(rng), n(rng), n(rng), n(rng)).normalized();
    const Eigen::Matrix3d m = quaternion_to_rotation(q);
    CHECK((m.transpose() * m - Eigen::Matrix3d::Identity()).norm() < 1e-12);
    CHECK(m.determinant() == doctest::Approx(1.0));
    CHECK((quaternion_to_rotation(rotation_to_quaternion(m)) - m).norm() < 1e-12);
  }
}

TEST_CASE("colmap camera center is -R^T t") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::ostringstream images;
  std::vector<std::pair<Eigen::Matrix3d, Eigen::Vector3d>> poses;
  for (int i = 1; i <= 20; ++i) {
    const Eigen::Vector4d q = Eigen::Vector4d(std::abs(n(rng)), n(rng), n(rng), n(rng)).normalized();
    const Eigen::Vector3d t(n(rng), n(rng), n(rng) + 5);
    poses.emplace_back(quaternion_to_rotation(q), t);
    char line[256];
    std::snprintf(line, sizeof line, "%d %.17g %.17g %.17g %.17g %.17g %.17g %.17g 1 seq/frame%04d.png\n", i, q[0],
                  q[1], q[2], q[3], t[0], t[1], t[2], i * 2);
    images << line << "10.0 20.0 -1 30.0 40.0 5\n";
  }
  std::istringstream cams("1 PINHOLE 1280 960 1000 1010 640 480\n");
  std::istringstream imgs(images.str());
  const CameraSet set = colmap_cameras(read_colmap_cameras(cams), read_colmap_images(imgs));
  REQUIRE(set.size() == 20);
  for (int i = 1; i <= 20; ++i) {
    const auto& [r, t] = poses[static_cast<std::size_t>(i - 1)];
    const Eigen::Vector3d expected = -r.transpose() * t;
    const Point3 c = camera_center(set.at(2 * i));
    CHECK((c.vec() - expected).norm() <= 1e-9);
  }
}

TEST_CASE("colmap models and errors") {
  std::vector<std::string> warnings;
  const ColmapIntrinsics radial{1, "SIMPLE_RADIAL", 100, 80, {500, 50, 40, 0.1}};
  const Eigen::Matrix3d k = intrinsics_matrix(radial, &warnings);
  CHECK(k(0, 0) == 500);
  CHECK(k(1, 1) == 500);
  CHECK(k(0, 2) == 50);
  CHECK(warnings.size() == 1);

  std::istringstream opencv("1 OPENCV 100 100 1 1 0 0 0 0 0 0\n");
  CHECK_THROWS_AS(read_colmap_cameras(opencv), UnknownCameraModel);
  std::istringstream count("1 PINHOLE 100 100 1 0 0\n");
  CHECK_THROWS_AS(read_colmap_cameras(count), ParseError);

  std::istringstream cams("1 SIMPLE_PINHOLE 100 100 1 0 0\n");
  const auto intr = read_colmap_cameras(cams);
  std::istringstream other("1 1 0 0 0 0 0 0 2 img_1.jpg\n\n");
  CHECK_THROWS_AS(colmap_cameras(intr, read_colmap_images(other)), MissingIntrinsics);
  std::istringstream noframe("1 1 0 0 0 0 0 0 1 image.jpg\n\n");
  CHECK_THROWS_AS(colmap_cameras(intr, read_colmap_images(noframe)), ParseError);
  std::istringstream twice("1 1 0 0 0 0 0 0 1 a_1.jpg\n\n2 1 0 0 0 0 0 0 1 b_1.jpg\n\n");
  CHECK_THROWS_AS(colmap_cameras(intr, read_colmap_images(twice)), ParseError);
  std::istringstream bad_q("1 2 0 0 0 0 0 0 1 a_1.jpg\n\n");
  CHECK_THROWS_AS(colmap_cameras(intr, read_colmap_images(bad_q)), UnnormalizedRotation);
}

TEST_CASE("frame index from image names") {
  CHECK(frame_from_name("frame_000123.png") == 123);
  CHECK(frame_from_name("dir/IMG42.jpg") == 42);
  CHECK(frame_from_name("cam2_0009") == 9);
  CHECK_FALSE(frame_from_name("cover.jpg").has_value());
  CHECK(frame_from_name("f12_x7.png", R"(^f(\d+))") == 12);
}

TEST_CASE("nms examples") {
  const std::vector<ScoredBox> same{{{0, 0, 10, 10}, 0.8}, {{0, 0, 10, 10}, 0.9}};
  const auto kept = nms(same, 0.2);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].score == 0.9);

  const std::vector<ScoredBox> apart{{{0, 0, 10, 10}, 0.5}, {{20, 0, 10, 10}, 0.7}, {{40, 0, 10, 10}, 0.6}};
  CHECK(nms(apart, 0.2).size() == 3);

  // Chain a-b-c: IoU(a,b) = IoU(b,c) = 1/3, IoU(a,c) = 0. Greedy by score
  // keeps b (0.9), drops a and c.
  const std::vector<ScoredBox> chain{{{0, 0, 10, 10}, 0.8}, {{5, 0, 10, 10}, 0.9}, {{10, 0, 10, 10}, 0.7}};
  const auto c = nms(chain, 0.2);
  REQUIRE(c.size() == 1);
  CHECK(c[0].score == 0.9);
  // With the middle box weakest, both ends survive.
  const std::vector<ScoredBox> chain2{{{0, 0, 10, 10}, 0.8}, {{5, 0, 10, 10}, 0.1}, {{10, 0, 10, 10}, 0.7}};
  CHECK(nms(chain2, 0.2).size() == 2);
}

TEST_CASE("nms ignores input order for distinct scores") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> pos(0, 100);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<ScoredBox> boxes;
    for (int i = 0; i < 25; ++i) boxes.push_back({{pos(rng), pos(rng), 20, 20}, 0.01 * (i + 1)});
    const auto ref = nms(boxes, 0.2);
    std::shuffle(boxes.begin(), boxes.end(), rng);
    CHECK(nms(boxes, 0.2) == ref);
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (std::size_t j = i + 1; j < ref.size(); ++j) CHECK(iou(ref[i].box, ref[j].box) <= 0.2);
    }
  }
}

TEST_CASE("merge_tiles") {
  const ImageSize frame{1280, 960};
  const std::vector<std::vector<ScoredBox>> one{{{{10, 20, 30, 30}, 0.9}}};
  const std::vector<TileOffset> origin{{0, 0}};
  const auto same = merge_tiles(one, origin, frame);
  REQUIRE(same.size() == 1);
  CHECK(same[0].box == BoundingBox{10, 20, 30, 30});

  const std::vector<std::vector<ScoredBox>> shifted{{{{400, 400, 30, 30}, 0.9}}};
  const std::vector<TileOffset> at{{334, 0}};
  CHECK(merge_tiles(shifted, at, frame)[0].box == BoundingBox{734, 400, 30, 30});

  // A fruit in the overlap of two tiles is reported by both.
  const std::vector<std::vector<ScoredBox>> dup{{{{340, 100, 30, 30}, 0.9}}, {{{6, 101, 30, 30}, 0.8}}};
  const std::vector<TileOffset> pair{{0, 0}, {334, 0}};
  const auto merged = merge_tiles(dup, pair, frame);
  REQUIRE(merged.size() == 1);
  CHECK(merged[0].score == 0.9);

  const std::vector<TileOffset> outside{{1300, 0}};
  CHECK_THROWS_AS(merge_tiles(one, outside, frame), OffsetOutOfFrame);
  CHECK_THROWS_AS(merge_tiles(one, pair, frame), InvalidConfig);
}

TEST_CASE("tile grid covers the frame") {
  const auto grid = tile_grid({1280, 960}, 416, 82);
  for (const auto& t : grid) {
    CHECK(t.x >= 0);
    CHECK(t.y >= 0);
    CHECK(t.x + 416 <= 1280);
    CHECK(t.y + 416 <= 960);
  }
  CHECK(grid.front().x == 0);
  CHECK(std::any_of(grid.begin(), grid.end(), [](const TileOffset& t) { return t.x + 416 == 1280 && t.y + 416 == 960; }));
  CHECK(grid[1].x == 334);
}

TEST_CASE("stride_sample") {
  const std::vector<int> frames{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const auto s = stride_sample(frames, 3);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == SampledFrame{1, 1});
  CHECK(s[1] == SampledFrame{4, 2});
  CHECK(s[2] == SampledFrame{7, 3});
  CHECK(s[3] == SampledFrame{10, 4});
  const auto all = stride_sample(frames, 1);
  REQUIRE(all.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) CHECK(all[i].source == frames[i]);
  CHECK_THROWS_AS(stride_sample(frames, 0), InvalidConfig);
}

TEST_CASE("scene directory round trip") {
  SceneConfig cfg;
  cfg.n_spheres = 20;
  cfg.n_frames = 30;
  cfg.seed = 5;
  const GroundTruthScene scene = generate_scene(cfg);
  const fs::path dir = scratch_dir("scene") / "s1";
  write_scene(dir, scene);
  const SceneFiles files = scene_files(dir);

  CHECK(to_labeled(read_mot16(files.gt)).size() == scene.gt_boxes.size());
  const CameraSet cams = read_colmap(files.cameras, files.images);
  REQUIRE(cams.size() == scene.cams.size());
  for (const auto& [frame, cam] : scene.cams) {
    const Mat34 a = cams.at(frame).p();
    CHECK((a - cam.p()).norm() <= 1e-9 * cam.p().norm());
  }
  const SceneConfig back = read_scene_config(files.json);
  CHECK(to_json(back) == to_json(cfg));
  std::ifstream in(files.json);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["cbyt_gt"].get<int>() == distinct_ids(scene.gt_boxes));
  CHECK(j["spheres"].size() == 20);
}

TEST_CASE("scene config json") {
  const auto cfg = scene_config_from_json(nlohmann::json::parse(R"({"n_spheres": 7, "path": {"kind": "arc"}})"));
  CHECK(cfg.n_spheres == 7);
  CHECK(cfg.path.kind == PathKind::Arc);
  CHECK(cfg.n_frames == SceneConfig{}.n_frames);
  CHECK_THROWS_AS(scene_config_from_json(nlohmann::json::parse(R"({"spheres": 7})")), InvalidConfig);
  CHECK_THROWS_AS(scene_config_from_json(nlohmann::json::parse(R"({"n_spheres": "many"})")), InvalidConfig);
  CHECK_THROWS_AS(scene_config_from_json(nlohmann::json::parse(R"({"path": {"kind": "spiral"}})")), InvalidConfig);
}
