#include "orchard/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"
#include "orchard/colmap.hpp"
#include "orchard/errors.hpp"
#include "orchard/metrics.hpp"
#include "orchard/mot16.hpp"
#include "orchard/regressor.hpp"
#include "orchard/scene_io.hpp"
#include "orchard/simulator.hpp"
#include "orchard/tracker.hpp"

namespace orchard {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSeedEnv = "ORCHARD_TRACK_SEED";

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return flag;
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(env, &used);
    if (used == std::string(env).size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidConfig(std::string(kSeedEnv) + " is not an unsigned integer: '" + env + "'");
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string fixed(double v, int digits = 5) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

json report_json(const HotaReport& r) {
  json alphas = json::array();
  const auto gates = hota_alphas();
  for (std::size_t a = 0; a < kAlphaCount; ++a) {
    const auto& c = r.counts[a];
    alphas.push_back({{"alpha", gates[a]},
                      {"hota", r.hota_alpha[a]},
                      {"deta", r.deta_alpha[a]},
                      {"assa", r.assa_alpha[a]},
                      {"tp", c.tp},
                      {"fn", c.fn},
                      {"fp", c.fp}});
  }
  return {{"hota", r.hota},
          {"deta", r.deta},
          {"assa", r.assa},
          {"mota", r.mota},
          {"mota_counts",
           {{"gt", r.mota_counts.gt}, {"fn", r.mota_counts.fn}, {"fp", r.mota_counts.fp}, {"idsw", r.mota_counts.idsw}}},
          {"cbyt", r.counting.cbyt},
          {"cbyt_gt", r.counting.cbyt_gt},
          {"relative_error", r.counting.error},
          {"exact", r.exact},
          {"alphas", alphas}};
}

const char* kReportHeader = "Sequence,HOTA,DetA,AssA,MOTA,CbyT,CbyT-GT,RelErr\n";

std::string report_row(const std::string& name, const HotaReport& r) {
  return name + "," + fixed(r.hota) + "," + fixed(r.deta) + "," + fixed(r.assa) + "," + fixed(r.mota) + "," +
         std::to_string(r.counting.cbyt) + "," + std::to_string(r.counting.cbyt_gt) + "," +
         fixed(r.counting.error) + "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Activation activation_from(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "tanh") return Activation::Tanh;
  if (s == "identity" || s == "linear") return Activation::Identity;
  throw InvalidConfig("unknown activation '" + s + "'");
}

// track ------------------------------------------------------------------

struct TrackArgs {
  fs::path dets, cameras, images, colmap_dir, out, count_json;
  std::string frame_pattern = kDefaultFramePattern;
  std::optional<double> focal;
  double c = 0.9;
  RansacParams ransac;
  double reloc_min_iou = 0.0;
  bool no_reloc = false;
  bool serial = false;
};

int run_track(const TrackArgs& a, std::ostream& out, std::ostream& err) {
  if (a.colmap_dir.empty() && (a.cameras.empty() || a.images.empty())) {
    throw InvalidConfig("give --colmap DIR or both --cameras and --images");
  }
  const fs::path cams_path = a.cameras.empty() ? a.colmap_dir / "cameras.txt" : a.cameras;
  const fs::path images_path = a.images.empty() ? a.colmap_dir / "images.txt" : a.images;
  std::ifstream cin(cams_path);
  if (!cin) throw ParseError("cannot open " + cams_path.string());
  std::ifstream iin(images_path);
  if (!iin) throw ParseError("cannot open " + images_path.string());
  const auto intrinsics = read_colmap_cameras(cin);
  std::vector<std::string> warnings;
  const CameraSet cams = colmap_cameras(intrinsics, read_colmap_images(iin), a.frame_pattern, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  if (intrinsics.empty()) throw MissingIntrinsics(cams_path.string() + " lists no camera");

  TrackerConfig cfg;
  cfg.c = a.c;
  cfg.ransac = a.ransac;
  cfg.reloc_min_iou = a.reloc_min_iou;
  cfg.relocalization = !a.no_reloc;
  cfg.execution = a.serial ? Execution::Serial : Execution::Parallel;
  const ColmapIntrinsics& first = intrinsics.begin()->second;
  cfg.f_focal = a.focal.value_or(first.params[0]);
  cfg.image = ImageSize{static_cast<double>(first.width), static_cast<double>(first.height)};

  const auto rows = read_mot16(a.dets);
  std::map<int, std::vector<BoundingBox>> frames;
  for (const auto& [f, cam] : cams) frames[f];
  for (const auto& d : to_detections(rows)) frames[d.frame_index] = d.boxes;
  std::vector<FrameDetections> seq;
  for (auto& [f, boxes] : frames) seq.push_back({f, std::move(boxes)});

  const TrackingResult result = run(seq, cams, cfg);
  const LabeledBoxes labeled = labeled_output(result);
  if (!a.out.empty()) {
    if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
    write_mot16(a.out, to_rows(labeled));
  }
  if (!a.count_json.empty()) {
    json active = json::object();
    for (const auto& [f, n] : result.per_frame_active) active[std::to_string(f)] = n;
    write_json(a.count_json, {{"count", result.count},
                              {"tracks", result.tracks.size()},
                              {"frames", seq.size()},
                              {"relocalization", cfg.relocalization},
                              {"per_frame_active", active}});
  }
  out << "count " << result.count << '\n';
  return 0;
}

// eval / report -----------------------------------------------------------

struct EvalArgs {
  fs::path pred, gt, json_out, csv_out;
  std::string name = "seq";
  double visibility = 0.5;
  bool serial = false;
};

HotaReport evaluate(const fs::path& pred, const fs::path& gt, double visibility, Execution exec) {
  EvalOptions opts;
  opts.visibility_threshold = visibility;
  opts.execution = exec;
  return hota(to_labeled(read_mot16(pred)), to_labeled(read_mot16(gt)), opts);
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  const HotaReport r = evaluate(a.pred, a.gt, a.visibility, a.serial ? Execution::Serial : Execution::Parallel);
  if (!a.json_out.empty()) write_json(a.json_out, report_json(r));
  if (!a.csv_out.empty()) write_text(a.csv_out, std::string(kReportHeader) + report_row(a.name, r));
  out << "HOTA " << fixed(r.hota) << " DetA " << fixed(r.deta) << " AssA " << fixed(r.assa) << " MOTA "
      << fixed(r.mota) << " CbyT " << r.counting.cbyt << " CbyT-GT " << r.counting.cbyt_gt << '\n';
  return 0;
}

struct ReportArgs {
  std::vector<std::string> sequences;  // name:pred:gt
  fs::path csv_out, json_out;
  double visibility = 0.5;
  bool serial = false;
};

int run_report(const ReportArgs& a, std::ostream& out) {
  struct Seq {
    std::string name;
    fs::path pred, gt;
  };
  std::vector<Seq> seqs;
  std::set<std::string> names;
  for (const auto& s : a.sequences) {
    const auto p1 = s.find(':');
    const auto p2 = p1 == std::string::npos ? p1 : s.find(':', p1 + 1);
    if (p2 == std::string::npos) throw InvalidConfig("--seq expects NAME:PRED:GT, got '" + s + "'");
    Seq q{s.substr(0, p1), s.substr(p1 + 1, p2 - p1 - 1), s.substr(p2 + 1)};
    if (q.name.empty() || q.name == "All" || !names.insert(q.name).second) {
      throw InvalidConfig("sequence names must be unique, nonempty and not 'All'");
    }
    seqs.push_back(std::move(q));
  }
  // Sequences run concurrently, each evaluated serially.
  std::vector<HotaReport> reports(seqs.size());
  for_each_index(a.serial ? Execution::Serial : Execution::Parallel, seqs.size(), [&](std::size_t i) {
    reports[i] = evaluate(seqs[i].pred, seqs[i].gt, a.visibility, Execution::Serial);
  });
  std::string csv = kReportHeader;
  json per_seq = json::object();
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    csv += report_row(seqs[i].name, reports[i]);
    per_seq[seqs[i].name] = report_json(reports[i]);
  }
  const HotaReport all = combine(reports);
  csv += report_row("All", all);
  if (!a.csv_out.empty()) write_text(a.csv_out, csv);
  if (!a.json_out.empty()) write_json(a.json_out, {{"sequences", per_seq}, {"all", report_json(all)}});
  out << csv;
  return 0;
}

// simulate / degrade --------------------------------------------------------

struct SimulateArgs {
  fs::path config, out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> spheres, frames;
  bool serial = false;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
  SceneConfig cfg = a.config.empty() ? SceneConfig{} : read_scene_config(a.config);
  if (const auto seed = resolve_seed(a.seed)) cfg.seed = *seed;
  if (a.spheres) cfg.n_spheres = *a.spheres;
  if (a.frames) cfg.n_frames = *a.frames;
  const GroundTruthScene scene = generate_scene(cfg, a.serial ? Execution::Serial : Execution::Parallel);
  write_scene(a.out_dir, scene);
  out << "spheres " << scene.spheres.size() << " frames " << scene.cams.size() << " gt_boxes "
      << scene.gt_boxes.size() << " cbyt_gt " << distinct_ids(scene.gt_boxes) << '\n';
  return 0;
}

struct DegradeArgs {
  fs::path gt, out;
  double rate = 1.0;
  double visibility = 0.5;
  std::optional<std::uint64_t> seed;
};

int run_degrade(const DegradeArgs& a, std::ostream& out) {
  if (!(a.rate >= 0 && a.rate <= 1)) throw InvalidConfig("rate must lie in [0, 1]");
  std::vector<Mot16Row> rows;
  for (const auto& r : read_mot16(a.gt)) {
    if (r.visibility >= a.visibility) rows.push_back(r);
  }
  const auto frames = to_detections(rows);
  const auto kept = degrade_detections(frames, a.rate, resolve_seed(a.seed).value_or(1));
  const auto det_rows = detection_rows(kept);
  if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
  write_mot16(a.out, det_rows);
  out << "kept " << det_rows.size() << " of " << rows.size() << '\n';
  return 0;
}

// regress -------------------------------------------------------------------

struct RegressArgs {
  fs::path records, config, json_out, predictions;
  std::optional<std::uint64_t> seed;
  std::optional<double> ratio;
  std::optional<int> k, epochs;
  bool serial = false;
};

int run_regress(const RegressArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Architecture> grid{Architecture{}};
  TrainParams params;
  int k = 10;
  double p_threshold = 0.05;
  double test_fraction = 0.2;
  std::optional<double> ratio;
  if (!a.config.empty()) {
    const json j = read_json(a.config);
    try {
      for (const auto& [key, v] : j.items()) {
        if (key == "architectures") {
          grid.clear();
          for (const auto& arch : v) {
            Architecture x;
            x.hidden = arch.at("hidden").get<std::vector<int>>();
            if (arch.contains("activation")) x.activation = activation_from(arch["activation"].get<std::string>());
            grid.push_back(x);
          }
        } else if (key == "lr") v.get_to(params.lr);
        else if (key == "momentum") v.get_to(params.momentum);
        else if (key == "epochs") v.get_to(params.epochs);
        else if (key == "batch") v.get_to(params.batch);
        else if (key == "k") v.get_to(k);
        else if (key == "p") v.get_to(p_threshold);
        else if (key == "test_fraction") v.get_to(test_fraction);
        else if (key == "ratio_threshold") ratio = v.get<double>();
        else throw InvalidConfig("unknown key '" + key + "' in " + a.config.string());
      }
    } catch (const json::exception& e) {
      throw InvalidConfig(a.config.string() + ": " + e.what());
    }
  }
  if (const auto seed = resolve_seed(a.seed)) params.seed = *seed;
  if (a.k) k = *a.k;
  if (a.epochs) params.epochs = *a.epochs;
  if (a.ratio) ratio = a.ratio;

  std::ifstream in(a.records);
  if (!in) throw ParseError("cannot open " + a.records.string());
  const auto all = read_records_csv(in);
  std::vector<TreeRecord> records = complete_records(all);
  const std::size_t incomplete = all.size() - records.size();
  if (ratio) {
    std::vector<std::string> skipped;
    records = filter_by_ratio(records, *ratio, &skipped);
    for (const auto& id : skipped) err << "warning: record " << id << " has F1+F2+F3 = 0, skipped\n";
  }
  const auto [train_idx, test_idx] = train_test_split(records.size(), test_fraction, params.seed);
  std::vector<TreeRecord> train;
  std::vector<TreeRecord> test;
  for (std::size_t i : train_idx) train.push_back(records[i]);
  for (std::size_t i : test_idx) test.push_back(records[i]);
  if (test.size() < 2) throw InvalidConfig("too few records for a test split");

  const Execution exec = a.serial ? Execution::Serial : Execution::Parallel;
  const CvReport cv = kfold_cv(train, grid, params, k, p_threshold, exec);
  const Architecture& best = cv.ranked.front().arch;
  const PreprocessPlan plan = fit_preprocess(train);
  const MlpModel model = train_mlp(plan.transform(train), targets(train), best, params);
  std::vector<std::string> warnings;
  const Eigen::VectorXd pred = model.predict(plan.transform(test, &warnings));
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const Eigen::VectorXd actual = targets(test);
  const double test_r2 = r2({pred.data(), static_cast<std::size_t>(pred.size())},
                            {actual.data(), static_cast<std::size_t>(actual.size())});

  json ranked = json::array();
  for (const auto& s : cv.ranked) ranked.push_back({{"architecture", s.arch.name()}, {"mean_r2", s.mean_r2}, {"fold_r2", s.fold_r2}});
  json tests = json::array();
  for (const auto& c : cv.comparisons) {
    tests.push_back({{"a", cv.ranked[c.a].arch.name()},
                     {"b", cv.ranked[c.b].arch.name()},
                     {"t", std::isfinite(c.test.t) ? json(c.test.t) : json(c.test.t > 0 ? "inf" : "-inf")},
                     {"p", c.test.p},
                     {"significant", c.test.significant}});
  }
  const json metrics{{"records", all.size()},
                     {"incomplete", incomplete},
                     {"used", records.size()},
                     {"train", train.size()},
                     {"test", test.size()},
                     {"ratio_threshold", ratio ? json(*ratio) : json(nullptr)},
                     {"k", k},
                     {"seed", params.seed},
                     {"cv", ranked},
                     {"t_tests", tests},
                     {"winner", best.name()},
                     {"winner_significant", cv.winner_significant},
                     {"test_r2", test_r2}};
  if (!a.json_out.empty()) write_json(a.json_out, metrics);
  if (!a.predictions.empty()) {
    std::string csv = "id,predicted,actual\n";
    for (std::size_t i = 0; i < test.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, ",%.6g,%d\n", pred(static_cast<Eigen::Index>(i)), test[i].target());
      csv += test[i].id + buf;
    }
    write_text(a.predictions, csv);
  }
  out << "winner " << best.name() << " cv_r2 " << fixed(cv.ranked.front().mean_r2, 4) << " test_r2 "
      << fixed(test_r2, 4) << (cv.winner_significant ? " (significant)" : " (not significant)") << '\n';
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fruit tracking, counting and yield tools", "orchard_track"};
  app.require_subcommand(1);

  TrackArgs track;
  auto* t = app.add_subcommand("track", "Track detections with known camera poses");
  t->add_option("--dets", track.dets, "MOT16 detection rows")->required();
  t->add_option("--colmap", track.colmap_dir, "Directory holding cameras.txt and images.txt");
  t->add_option("--cameras", track.cameras, "COLMAP cameras.txt");
  t->add_option("--images", track.images, "COLMAP images.txt");
  t->add_option("--frame-pattern", track.frame_pattern, "Regex whose first group is the frame index");
  t->add_option("--out", track.out, "MOT16 tracking results");
  t->add_option("--count-json", track.count_json, "Count summary");
  t->add_option("--c", track.c, "Sphere ray factor");
  t->add_option("--focal", track.focal, "Focal length for the ray estimate (default: first COLMAP camera)");
  t->add_option("--max-geom-error", track.ransac.max_geom_error, "RANSAC inlier threshold in pixels");
  t->add_option("--inliers-ratio", track.ransac.inliers_ratio, "RANSAC consensus ratio");
  t->add_option("--max-iters", track.ransac.max_iters, "RANSAC iterations");
  t->add_option("--min-track-len", track.ransac.min_track_len, "Boxes a track needs before sphere estimation");
  t->add_option("--reloc-min-iou", track.reloc_min_iou, "Relocalization IoU gate");
  t->add_flag("--no-reloc", track.no_reloc, "Disable relocalization");
  t->add_flag("--serial", track.serial, "Run the serial reference path");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "HOTA, MOTA and counting error of one sequence");
  e->add_option("--pred", eval.pred, "Predicted MOT16 tracks")->required();
  e->add_option("--gt", eval.gt, "Ground-truth MOT16 tracks")->required();
  e->add_option("--json", eval.json_out, "Full report");
  e->add_option("--csv", eval.csv_out, "One-row summary CSV");
  e->add_option("--name", eval.name, "Sequence name in the CSV");
  e->add_option("--visibility", eval.visibility, "Ignore gt rows below this visibility");
  e->add_flag("--serial", eval.serial, "Run the serial reference path");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Generate a synthetic orchard scene");
  s->add_option("--config", sim.config, "Scene config JSON (omitted keys keep defaults)");
  s->add_option("--out", sim.out_dir, "Output directory")->required();
  s->add_option("--seed", sim.seed, std::string("Seed (fallback: $") + kSeedEnv + ", then the config)");
  s->add_option("--spheres", sim.spheres, "Number of fruits");
  s->add_option("--frames", sim.frames, "Number of frames");
  s->add_flag("--serial", sim.serial, "Run the serial reference path");

  DegradeArgs deg;
  auto* d = app.add_subcommand("degrade", "Drop ground-truth boxes to emulate a detector");
  d->add_option("--gt", deg.gt, "Ground-truth MOT16 file")->required();
  d->add_option("--rate", deg.rate, "Probability of keeping each box")->required();
  d->add_option("--out", deg.out, "Detection rows")->required();
  d->add_option("--seed", deg.seed, std::string("Seed (fallback: $") + kSeedEnv + ", then 1)");
  d->add_option("--visibility", deg.visibility, "Ignore gt rows below this visibility");

  RegressArgs reg;
  auto* r = app.add_subcommand("regress", "Cross-validate and fit the yield regressor");
  r->add_option("--records", reg.records, "Tree records CSV")->required();
  r->add_option("--config", reg.config, "Regressor config JSON");
  r->add_option("--json", reg.json_out, "Metrics JSON");
  r->add_option("--predictions", reg.predictions, "Test-split predictions CSV");
  r->add_option("--seed", reg.seed, std::string("Seed (fallback: $") + kSeedEnv + ", then 1)");
  r->add_option("--ratio", reg.ratio, "Minimum (CbyT-A + CbyT-B) / (F1 + F2 + F3)");
  r->add_option("--k", reg.k, "Cross-validation folds");
  r->add_option("--epochs", reg.epochs, "Training epochs");
  r->add_flag("--serial", reg.serial, "Run the serial reference path");

  ReportArgs rep;
  auto* p = app.add_subcommand("report", "Evaluate several sequences into one table");
  p->add_option("--seq", rep.sequences, "NAME:PRED:GT, repeatable")->required();
  p->add_option("--csv", rep.csv_out, "Table CSV");
  p->add_option("--json", rep.json_out, "Per-sequence reports");
  p->add_option("--visibility", rep.visibility, "Ignore gt rows below this visibility");
  p->add_flag("--serial", rep.serial, "Run the serial reference path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& ex) {
    err << "error: " << ex.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  try {
    if (*t) return run_track(track, out, err);
    if (*e) return run_eval(eval, out);
    if (*s) return run_simulate(sim, out);
    if (*d) return run_degrade(deg, out);
    if (*r) return run_regress(reg, out, err);
    if (*p) return run_report(rep, out);
  } catch (const InputError& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace orchard
