// Serial reference vs OpenMP timing for the parallel kernels. Each pair is
// also checked for identical output.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "CLI11.hpp"
#include "orchard/metrics.hpp"
#include "orchard/regressor.hpp"
#include "orchard/simulator.hpp"
#include "orchard/tracker.hpp"

using namespace orchard;

namespace {

double best_ms(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

template <class Result>
bool compare(const char* name, int reps, const std::function<Result(Execution)>& kernel) {
  Result serial;
  Result parallel;
  const double s = best_ms(reps, [&] { serial = kernel(Execution::Serial); });
  const double p = best_ms(reps, [&] { parallel = kernel(Execution::Parallel); });
  const bool same = serial == parallel;
  std::printf("%-10s serial %9.1f ms  parallel %9.1f ms  speedup %5.2fx  %s\n", name, s, p, s / p,
              same ? "identical" : "MISMATCH");
  return same;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel kernel timings"};
  int reps = 3;
  int spheres = 150;
  int frames = 300;
  app.add_option("--reps", reps, "Repetitions, best time is reported");
  app.add_option("--spheres", spheres);
  app.add_option("--frames", frames);
  CLI11_PARSE(app, argc, argv);

  SceneConfig cfg;
  cfg.n_spheres = spheres;
  cfg.n_frames = frames;
  const GroundTruthScene scene = generate_scene(cfg);
  const auto gt_frames = frames_from_labels(scene.gt_boxes, 1, cfg.n_frames);
  const auto dets = degrade_detections(gt_frames, 0.8, 7);
  TrackerConfig tcfg;
  tcfg.f_focal = cfg.intrinsics.focal;
  tcfg.image = ImageSize{cfg.intrinsics.width, cfg.intrinsics.height};
  const LabeledBoxes tracked = labeled_output(run(dets, scene.cams, tcfg));
  const auto records = synthetic_records(400, 1);

  std::printf("threads %d, scene %d spheres x %d frames, %zu gt boxes\n", max_threads(), spheres, frames,
              scene.gt_boxes.size());
  bool ok = true;
  ok &= compare<LabeledBoxes>("render", reps, [&](Execution e) {
    return render_boxes(cfg, scene.spheres, scene.cams, scene.blackouts, e);
  });
  ok &= compare<LabeledBoxes>("tracker", reps, [&](Execution e) {
    TrackerConfig c = tcfg;
    c.execution = e;
    return labeled_output(run(dets, scene.cams, c));
  });
  ok &= compare<std::vector<double>>("hota", reps, [&](Execution e) {
    EvalOptions o;
    o.execution = e;
    const HotaReport r = hota(tracked, scene.gt_boxes, o);
    return std::vector<double>(r.hota_alpha.begin(), r.hota_alpha.end());
  });
  ok &= compare<std::vector<double>>("kfold_cv", reps, [&](Execution e) {
    TrainParams p;
    p.epochs = 50;
    const std::vector<Architecture> grid{{{16, 16}, Activation::Relu}, {{8}, Activation::Tanh}};
    const CvReport r = kfold_cv(records, grid, p, 10, 0.05, e);
    std::vector<double> out;
    for (const auto& s : r.ranked) out.insert(out.end(), s.fold_r2.begin(), s.fold_r2.end());
    return out;
  });
  return ok ? 0 : 1;
}
