// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oracles/brute_force_assignment.hpp"
#include "oracles/exhaustive_hota.hpp"
#include "orchard/assignment.hpp"
#include "orchard/cli.hpp"
#include "orchard/colmap.hpp"
#include "orchard/geometry.hpp"
#include "orchard/metrics.hpp"
#include "orchard/mot16.hpp"
#include "orchard/regressor.hpp"
#include "orchard/simulator.hpp"
#include "orchard/sphere.hpp"
#include "orchard/tracker.hpp"
#include "support/cameras.hpp"
#include "support/micro_instances.hpp"

using namespace orchard;
namespace fs = std::filesystem;

namespace {

// Criterion 1 and 2
constexpr std::uint64_t kSceneSeed = 1;
constexpr std::uint64_t kDegradeSeed = 7;
constexpr double kMaxErrorPerfect = 0.05;
constexpr double kMaxErrorRate08 = 0.10;
constexpr double kMaxSeconds1 = 60;
constexpr double kAblationFactor = 2.0;
constexpr double kMaxSeconds2 = 30;
// Criterion 3
constexpr int kMicroInstances = 200;
constexpr double kOracleTol = 1e-9;
constexpr double kProductTol = 1e-12;
constexpr double kMaxSeconds3 = 60;
// Criterion 4
constexpr double kPerfectTol = 1e-12;
// Criterion 5
constexpr int kRandomCameras = 1000;
constexpr double kCenterResidualTol = 1e-9;
constexpr double kTriangulationTol = 1e-6;
constexpr int kRansacTrials = 100;
constexpr double kCorruptFraction = 0.3;
constexpr double kRansacCenterTol = 1e-3;
constexpr double kRayTol = 0.05;
// Criterion 6
constexpr int kAssignmentMatrices = 1000;
constexpr double kAssignmentTol = 1e-9;
// Criterion 7
constexpr double kHandTol = 1e-12;
// Criterion 8
constexpr double kGradientTol = 1e-4;
constexpr double kGradientFloor = 1e-4;  // denominator floor for near-zero gradients
constexpr double kMinR2 = 0.99;
// Criterion 9
constexpr double kMaxSuiteSeconds = 300;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Shared scene for criteria 1 and 2.
struct Scene {
  GroundTruthScene gt;
  std::vector<FrameDetections> frames;
  int cbyt_gt = 0;
  TrackerConfig tracker;
};

const Scene& default_scene() {
  static const Scene scene = [] {
    SceneConfig cfg;
    cfg.seed = kSceneSeed;
    Scene s{generate_scene(cfg), {}, 0, {}};
    s.frames = frames_from_labels(s.gt.gt_boxes, 1, cfg.n_frames);
    s.cbyt_gt = distinct_ids(s.gt.gt_boxes);
    s.tracker.f_focal = cfg.intrinsics.focal;
    s.tracker.image = ImageSize{cfg.intrinsics.width, cfg.intrinsics.height};
    return s;
  }();
  return scene;
}

struct CountRun {
  int count;
  double error;
};

CountRun count_at(double rate, bool relocalization) {
  const Scene& s = default_scene();
  TrackerConfig cfg = s.tracker;
  cfg.relocalization = relocalization;
  const auto dets = degrade_detections(s.frames, rate, kDegradeSeed);
  const TrackingResult r = run(dets, s.gt.cams, cfg);
  return {r.count, counting_error(r.count, s.cbyt_gt)};
}

Outcome sensitivity_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  (void)default_scene();
  const double rates[] = {1.0, 0.8, 0.6, 0.4};
  std::vector<double> err;
  Outcome o;
  for (double rate : rates) {
    const CountRun r = count_at(rate, true);
    err.push_back(r.error);
    o.detail += fmt("rate %.1f", rate) + " count " + std::to_string(r.count) + " err " + fmt("%.4f; ", r.error);
  }
  const double secs = seconds_since(t0);
  o.detail += "CbyT-GT " + std::to_string(default_scene().cbyt_gt) + ", " + fmt("%.1f s", secs);
  o.pass = err[0] <= kMaxErrorPerfect && err[1] <= kMaxErrorRate08 && err[1] < err[2] && err[2] < err[3] &&
           secs <= kMaxSeconds1;
  return o;
}

Outcome relocalization_ablation() {
  const auto t0 = std::chrono::steady_clock::now();
  const CountRun on = count_at(0.8, true);
  const CountRun off = count_at(0.8, false);
  const double secs = seconds_since(t0);
  Outcome o;
  o.detail = "with reloc count " + std::to_string(on.count) + fmt(" err %.4f", on.error) + ", without count " +
             std::to_string(off.count) + fmt(" err %.4f", off.error) + fmt(", %.1f s", secs);
  o.pass = off.error >= kAblationFactor * on.error && off.count > on.count && secs <= kMaxSeconds2;
  return o;
}

Outcome hota_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240607);
  int instances = 0;
  int bad_oracle = 0;
  int bad_product = 0;
  double worst = 0;
  while (instances < kMicroInstances) {
    const auto m = testing::micro_instance(rng);
    if (m.gt.empty()) continue;
    ++instances;
    double sum_oracle = 0;
    for (double alpha : hota_alphas()) {
      const AlphaCounts c = hota_alpha(m.pred, m.gt, alpha);
      const double ex = oracle::exhaustive_hota(m.pred, m.gt, alpha).hota;
      const double diff = std::abs(c.hota() - ex);
      worst = std::max(worst, diff);
      if (diff > kOracleTol) ++bad_oracle;
      if (std::abs(c.hota() - std::sqrt(c.deta() * c.assa())) > kProductTol) ++bad_product;
      sum_oracle += ex;
    }
    // The integrated score, as reported.
    const HotaReport r = hota(m.pred, m.gt);
    if (std::abs(r.hota - sum_oracle / kAlphaCount) > kOracleTol) ++bad_oracle;
    for (std::size_t a = 0; a < kAlphaCount; ++a) {
      if (std::abs(r.hota_alpha[a] - std::sqrt(r.deta_alpha[a] * r.assa_alpha[a])) > kProductTol) ++bad_product;
    }
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.detail = std::to_string(instances) + " instances, oracle mismatches " + std::to_string(bad_oracle) +
             fmt(" (max diff %.2e)", worst) + ", product mismatches " + std::to_string(bad_product) +
             fmt(", %.1f s", secs);
  o.pass = bad_oracle == 0 && bad_product == 0 && secs <= kMaxSeconds3;
  return o;
}

Outcome perfect_tracking() {
  std::vector<SceneConfig> configs;
  for (std::uint64_t seed : {1, 2, 3}) {
    SceneConfig c;
    c.seed = seed;
    configs.push_back(c);
  }
  SceneConfig arc;
  arc.path.kind = PathKind::Arc;
  arc.n_spheres = 60;
  arc.n_frames = 120;
  configs.push_back(arc);
  SceneConfig dense;
  dense.occlusion.expected_blackouts = 3;
  dense.n_frames = 150;
  configs.push_back(dense);
  Outcome o;
  int failures = 0;
  for (const auto& cfg : configs) {
    const GroundTruthScene s = generate_scene(cfg);
    const HotaReport r = hota(s.gt_boxes, s.gt_boxes);
    for (double v : {r.hota, r.deta, r.assa, r.mota}) {
      if (std::abs(v - 1.0) > kPerfectTol) ++failures;
    }
  }
  o.detail = std::to_string(configs.size()) + " scenes, scores off 1: " + std::to_string(failures);
  o.pass = failures == 0;
  return o;
}

Outcome geometry_suite() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_real_distribution<double> f(300, 2000);
  Outcome o;

  // (a) P (C; 1) = 0.
  double worst_a = 0;
  for (int i = 0; i < kRandomCameras; ++i) {
    const CameraMatrix cam = compose_camera(intrinsics(f(rng), f(rng), u(rng) * 100, u(rng) * 100),
                                            testing::random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), u(rng)));
    const Point3 c = camera_center(cam);
    worst_a = std::max(worst_a, (cam.p() * Eigen::Vector4d(c.x, c.y, c.z, 1)).norm());
  }
  const bool a = worst_a <= kCenterResidualTol;

  // (b) noise-free triangulation.
  double worst_b = 0;
  for (int i = 0; i < 200; ++i) {
    const Point3 truth{u(rng) * 0.5, u(rng) * 0.5, 2 + u(rng) * 0.3};
    std::vector<Observation> obs;
    for (const auto& cam : testing::arc_cameras(truth.vec(), 2 + i % 6, 2.0, 0.8)) {
      obs.push_back({project(cam, truth), cam});
    }
    const auto x = dlt_triangulate(obs);
    worst_b = std::max(worst_b, x ? (x->vec() - truth.vec()).norm() / truth.vec().norm() : 1e300);
  }
  const bool b = worst_b <= kTriangulationTol;

  // (c) 30% corrupted centroids.
  const int views = 10;
  const int corrupted = static_cast<int>(std::lround(kCorruptFraction * views));
  std::uniform_real_distribution<double> offset(20, 60);
  std::uniform_real_distribution<double> angle(0, 2 * M_PI);
  int c_fail = 0;
  double worst_c = 0;
  for (int trial = 0; trial < kRansacTrials; ++trial) {
    const Point3 truth{u(rng) * 0.3, u(rng) * 0.3, 2 + u(rng) * 0.2};
    CameraSet cams;
    TrackObservations track;
    for (const auto& cam : testing::arc_cameras(truth.vec(), views, 2.0, 0.8)) {
      const Pixel px = project(cam, truth);
      cams.emplace(cam.frame_index(), cam);
      track.emplace(cam.frame_index(), BoundingBox{px.u - 20, px.v - 20, 40, 40});
    }
    std::vector<int> frames(views);
    std::iota(frames.begin(), frames.end(), 1);
    std::shuffle(frames.begin(), frames.end(), rng);
    std::vector<int> bad(frames.begin(), frames.begin() + corrupted);
    for (int fr : bad) {
      const double r = offset(rng);
      const double t = angle(rng);
      track[fr].x += r * std::cos(t);
      track[fr].y += r * std::sin(t);
    }
    const auto tri = ransac_triangulation(track, cams, RansacParams{});
    if (!tri) {
      ++c_fail;
      continue;
    }
    for (int fr : bad) {
      if (std::find(tri->inlier_frames.begin(), tri->inlier_frames.end(), fr) != tri->inlier_frames.end()) ++c_fail;
    }
    const double err = (tri->center.vec() - truth.vec()).norm() / truth.vec().norm();
    worst_c = std::max(worst_c, err);
    if (err > kRansacCenterTol) ++c_fail;
  }
  const bool c = c_fail == 0;

  // (d) ray from exact boxes with c = 1.
  std::uniform_real_distribution<double> radius(0.02, 0.06);
  double worst_d = 0;
  for (int i = 0; i < 100; ++i) {
    const Point3 truth{u(rng) * 0.3, u(rng) * 0.3, 2 + u(rng) * 0.2};
    const double ray = radius(rng);
    CameraSet cams;
    TrackObservations track;
    for (const auto& cam : testing::arc_cameras(truth.vec(), 8, 1.5 + 0.1 * (i % 5), 0.8)) {
      const Pixel px = project(cam, truth);
      const double half = 1000.0 * ray / (truth.vec() - camera_center(cam).vec()).norm();
      cams.emplace(cam.frame_index(), cam);
      track.emplace(cam.frame_index(), BoundingBox{px.u - half, px.v - half, 2 * half, 2 * half});
    }
    const auto est = estimate_orange(track, cams, 1000.0, 1.0, RansacParams{});
    worst_d = std::max(worst_d, est ? std::abs(est->ray - ray) / ray : 1e300);
  }
  const bool d = worst_d <= kRayTol;

  o.pass = a && b && c && d;
  o.detail = fmt("(a) max residual %.2e", worst_a) + fmt(", (b) max rel err %.2e", worst_b) + ", (c) failures " +
             std::to_string(c_fail) + fmt(" max rel err %.2e", worst_c) + fmt(", (d) max ray err %.4f", worst_d);
  return o;
}

Outcome assignment_oracle() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> rows_d(1, 7);
  std::uniform_int_distribution<std::size_t> cols_d(1, 9);
  std::uniform_real_distribution<double> val(0, 1);
  int cost_fail = 0;
  for (int t = 0; t < kAssignmentMatrices; ++t) {
    CostMatrix m(rows_d(rng), cols_d(rng));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = val(rng);
    const Assignment got = solve_assignment(m);
    const auto ref = oracle::brute_force_assignment(m);
    if (got.size() != std::min(m.rows(), m.cols()) || std::abs(got.total_cost(m) - ref.best_cost) > kAssignmentTol) {
      ++cost_fail;
    }
  }
  std::uniform_real_distribution<double> pos(0, 200);
  std::uniform_real_distribution<double> ext(5, 40);
  int zero_pairs = 0;
  for (int t = 0; t < kAssignmentMatrices; ++t) {
    std::vector<BoundingBox> a(std::uniform_int_distribution<int>(0, 8)(rng));
    std::vector<BoundingBox> b(std::uniform_int_distribution<int>(0, 8)(rng));
    for (auto& box : a) box = {pos(rng), pos(rng), ext(rng), ext(rng)};
    for (auto& box : b) box = {pos(rng), pos(rng), ext(rng), ext(rng)};
    for (const auto& [p, q] : associate_boxes(a, b).pairs) {
      if (!(iou(a[p], b[q]) > 0)) ++zero_pairs;
    }
  }
  Outcome o;
  o.detail = std::to_string(kAssignmentMatrices) + " matrices, cost mismatches " + std::to_string(cost_fail) +
             ", zero-IoU pairs kept " + std::to_string(zero_pairs);
  o.pass = cost_fail == 0 && zero_pairs == 0;
  return o;
}

Outcome split_track() {
  LabeledBoxes gt;
  LabeledBoxes pred;
  for (int f = 1; f <= 10; ++f) {
    const BoundingBox box{10.0 * f, 40, 30, 30};
    gt.push_back({f, 1, box, 1.0});
    pred.push_back({f, f <= 5 ? 1 : 2, box, 1.0});
  }
  const HotaReport r = hota(pred, gt);
  double worst = 0;
  for (std::size_t a = 0; a < kAlphaCount; ++a) {
    worst = std::max({worst, std::abs(r.deta_alpha[a] - 1.0), std::abs(r.assa_alpha[a] - 0.5),
                      std::abs(r.hota_alpha[a] - std::sqrt(0.5))});
  }
  Outcome o;
  o.detail = fmt("HOTA %.12f", r.hota) + fmt(", DetA %.12f", r.deta) + fmt(", AssA %.12f", r.assa) +
             fmt(", max deviation %.1e", worst);
  o.pass = worst <= kHandTol;
  return o;
}

Outcome regressor_properties() {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  // Gradient check, 1 to 3 hidden layers.
  Eigen::MatrixXd x(9, 5);
  Eigen::VectorXd y(9);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) x(i, c) = n(rng);
    y(i) = n(rng);
  }
  double worst_grad = 0;
  const std::vector<std::vector<int>> layouts{{7}, {7, 6}, {8, 6, 4}};
  for (const auto& hidden : layouts) {
    for (Activation act : {Activation::Tanh, Activation::Relu}) {
      const MlpModel m = init_mlp(5, {hidden, act}, 17, 0.2);
      const MlpGradients g = mse_gradients(m, x, y);
      const double h = 1e-6;
      for (std::size_t l = 0; l < m.weights.size(); ++l) {
        for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r) {
          for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c) {
            MlpModel plus = m;
            MlpModel minus = m;
            plus.weights[l](r, c) += h;
            minus.weights[l](r, c) -= h;
            const double num = (mse_loss(plus, x, y) - mse_loss(minus, x, y)) / (2 * h);
            const double ana = g.weights[l](r, c);
            worst_grad = std::max(worst_grad, std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), kGradientFloor}));
          }
        }
        for (Eigen::Index r = 0; r < m.biases[l].size(); ++r) {
          MlpModel plus = m;
          MlpModel minus = m;
          plus.biases[l](r) += h;
          minus.biases[l](r) -= h;
          const double num = (mse_loss(plus, x, y) - mse_loss(minus, x, y)) / (2 * h);
          const double ana = g.biases[l](r);
          worst_grad = std::max(worst_grad, std::abs(num - ana) / std::max({std::abs(num), std::abs(ana), kGradientFloor}));
        }
      }
    }
  }

  // Noiseless linear data, held-out R^2.
  Eigen::MatrixXd lx(300, 4);
  Eigen::VectorXd ly(300);
  for (Eigen::Index i = 0; i < lx.rows(); ++i) {
    for (Eigen::Index c = 0; c < 4; ++c) lx(i, c) = n(rng);
    ly(i) = 30 * lx(i, 0) - 12 * lx(i, 1) + 5 * lx(i, 2) + lx(i, 3) + 250;
  }
  const auto [train, test] = train_test_split(300, 0.2, 9);
  Eigen::MatrixXd xtr(static_cast<Eigen::Index>(train.size()), 4);
  Eigen::VectorXd ytr(static_cast<Eigen::Index>(train.size()));
  for (std::size_t i = 0; i < train.size(); ++i) {
    xtr.row(static_cast<Eigen::Index>(i)) = lx.row(static_cast<Eigen::Index>(train[i]));
    ytr(static_cast<Eigen::Index>(i)) = ly(static_cast<Eigen::Index>(train[i]));
  }
  Eigen::MatrixXd xte(static_cast<Eigen::Index>(test.size()), 4);
  std::vector<double> yte;
  for (std::size_t i = 0; i < test.size(); ++i) {
    xte.row(static_cast<Eigen::Index>(i)) = lx.row(static_cast<Eigen::Index>(test[i]));
    yte.push_back(ly(static_cast<Eigen::Index>(test[i])));
  }
  TrainParams p;
  p.lr = 0.01;
  p.epochs = 100;
  const MlpModel linear = train_mlp(xtr, ytr, {{}, Activation::Identity}, p);
  const Eigen::VectorXd pred = linear.predict(xte);
  const double held_out_r2 = r2({pred.data(), yte.size()}, yte);

  // 10-fold CV on a synthetic yield table with two identical architectures.
  const auto records = synthetic_records(200, 4);
  TrainParams cvp;
  cvp.epochs = 60;
  const Architecture arch{{16, 16}, Activation::Relu};
  const std::vector<Architecture> twins{arch, arch};
  const CvReport twin = kfold_cv(records, twins, cvp, 10);

  Outcome o;
  o.detail = fmt("max gradient rel err %.2e", worst_grad) + fmt(", held-out linear R2 %.6f", held_out_r2) +
             ", identical archs p " + fmt("%.3f", twin.comparisons.front().test.p) +
             (twin.winner_significant ? " (significant)" : " (not significant)") +
             fmt(", synthetic-yield 10-fold R2 %.3f", twin.ranked.front().mean_r2);
  o.pass = worst_grad <= kGradientTol && held_out_r2 >= kMinR2 && !twin.winner_significant &&
           !twin.comparisons.front().test.significant;
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome io_round_trips(std::chrono::steady_clock::time_point suite_start) {
  Outcome o;
  // MOT16 canonical file.
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(0, 1280);
  std::uniform_real_distribution<double> size(1, 80);
  std::vector<Mot16Row> rows;
  for (int i = 0; i < 1000; ++i) rows.push_back({1 + i / 25, 1 + i % 25, pos(rng), pos(rng), size(rng), size(rng), 1, 1, 1});
  std::ostringstream first;
  write_mot16(first, rows);
  std::istringstream in(first.str());
  std::ostringstream second;
  write_mot16(second, read_mot16(in));
  const bool mot = first.str() == second.str();

  // COLMAP identity fixture.
  std::istringstream cams("1 SIMPLE_PINHOLE 640 480 1 0 0\n");
  std::istringstream imgs("1 1 0 0 0 0 0 0 1 frame_000001.png\n\n");
  const CameraSet set = colmap_cameras(read_colmap_cameras(cams), read_colmap_images(imgs));
  Mat34 identity = Mat34::Zero();
  identity.leftCols<3>().setIdentity();
  const bool colmap = set.size() == 1 && set.begin()->second.p() == identity;

  // Full CLI pipeline twice.
  const fs::path root = fs::temp_directory_path() / "orchard_acceptance";
  fs::remove_all(root);
  bool cli_ok = true;
  std::vector<std::string> outputs[2];
  const char* files[] = {"scene/gt.txt", "scene/cameras.txt", "scene/images.txt", "scene/scene.json",
                         "det.txt",      "trk.txt",           "count.json",       "eval.json",
                         "report.csv"};
  double pipeline_hota = 0;
  for (int run_i = 0; run_i < 2; ++run_i) {
    const std::string d = (root / ("run" + std::to_string(run_i))).string();
    std::ostringstream out;
    std::ostringstream err;
    const std::vector<std::vector<std::string>> steps{
        {"simulate", "--out", d + "/scene", "--seed", "11"},
        {"degrade", "--gt", d + "/scene/gt.txt", "--rate", "0.8", "--seed", "11", "--out", d + "/det.txt"},
        {"track", "--dets", d + "/det.txt", "--colmap", d + "/scene", "--out", d + "/trk.txt", "--count-json",
         d + "/count.json"},
        {"eval", "--pred", d + "/trk.txt", "--gt", d + "/scene/gt.txt", "--json", d + "/eval.json"},
        {"report", "--seq", "synthetic:" + d + "/trk.txt:" + d + "/scene/gt.txt", "--csv", d + "/report.csv"}};
    for (const auto& step : steps) {
      if (cli_main(step, out, err) != 0) {
        cli_ok = false;
        o.detail += "step " + step.front() + " failed: " + err.str() + "; ";
      }
    }
    for (const char* f : files) outputs[run_i].push_back(slurp(fs::path(d) / f));
    if (run_i == 0 && cli_ok) {
      std::ifstream j(fs::path(d) / "eval.json");
      pipeline_hota = nlohmann::json::parse(j)["hota"].get<double>();
    }
  }
  bool identical = cli_ok;
  for (std::size_t i = 0; i < std::size(files); ++i) {
    if (outputs[0][i] != outputs[1][i] || outputs[0][i].empty()) {
      identical = false;
      o.detail += std::string("differs or empty: ") + files[i] + "; ";
    }
  }
  fs::remove_all(root);
  const double secs = seconds_since(suite_start);
  o.detail += std::string("MOT16 byte-identical ") + (mot ? "yes" : "no") + ", COLMAP P=[I|0] " +
              (colmap ? "yes" : "no") + ", CLI runs identical " + (identical ? "yes" : "no") +
              fmt(" (rate 0.8 HOTA %.4f)", pipeline_hota) + fmt(", acceptance wall-clock %.1f s", secs);
  o.pass = mot && colmap && identical && secs <= kMaxSuiteSeconds;
  return o;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"sensitivity trend", sensitivity_trend},
      {"relocalization ablation", relocalization_ablation},
      {"HOTA oracle equivalence", hota_oracle},
      {"perfect-tracking fixed point", perfect_tracking},
      {"geometry suite", geometry_suite},
      {"assignment oracle", assignment_oracle},
      {"split-track HOTA", split_track},
      {"regressor properties", regressor_properties},
      {"I/O round trips", [&] { return io_round_trips(start); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
