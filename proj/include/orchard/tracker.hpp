#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "orchard/labels.hpp"
#include "orchard/parallel.hpp"
#include "orchard/sphere.hpp"

namespace orchard {

enum class TrackState { Active, Lost };

/// One fruit hypothesis. `id` stays empty (the NIL label) until the first
/// successful sphere estimate.
struct Track {
  std::optional<int> id;
  TrackState state = TrackState::Active;
  TrackObservations observations;
  std::optional<SphereEstimate> sphere;
};

struct FrameDetections {
  int frame_index = 1;
  std::vector<BoundingBox> boxes;
};

struct TrackerConfig {
  RansacParams ransac;
  double c = 0.9;
  double f_focal = 1000.0;
  double reloc_min_iou = 0.0;
  bool relocalization = true;
  std::optional<ImageSize> image;
  Execution execution = Execution::Parallel;
};

struct TrackingResult {
  std::vector<Track> tracks;
  int count = 0;  // tracks holding a sphere estimate
  std::map<int, int> per_frame_active;
};

struct RelocMatch {
  std::size_t track;
  std::size_t box;
  friend bool operator==(const RelocMatch&, const RelocMatch&) = default;
};

/// Matches reprojections of LOST, sphere-bearing tracks against the boxes of
/// `dets` not flagged in `claimed`. Tracks whose reprojection is out of view
/// produce no candidate. Indices refer to `tracks` and `dets.boxes`.
std::vector<RelocMatch> relocalize(std::span<const Track> tracks, const FrameDetections& dets,
                                   std::span<const char> claimed, const CameraMatrix& cam,
                                   const TrackerConfig& cfg);

/// Frame-by-frame tracking state machine. Typical use is run(); the step
/// methods are public so a caller can drive frames incrementally.
class Tracker {
 public:
  Tracker(const CameraSet& cams, TrackerConfig cfg);

  /// Sets the first frame. No tracks exist yet.
  void begin(FrameDetections first);
  /// Re-attaches LOST tracks to unclaimed boxes of the current frame.
  void relocalize_current();
  /// Associates the current frame with `next`, extends or spawns tracks,
  /// updates states, re-estimates spheres, and makes `next` current.
  void associate_next(FrameDetections next);

  int active_count() const;
  const std::vector<Track>& tracks() const { return tracks_; }
  /// Track index owning each box of the current frame.
  const std::vector<std::optional<std::size_t>>& owners() const { return owners_; }
  TrackingResult result() const;

 private:
  void reestimate();

  CameraSet cams_;
  TrackerConfig cfg_;
  std::vector<Track> tracks_;
  FrameDetections current_;
  std::vector<std::optional<std::size_t>> owners_;
  std::map<int, int> per_frame_active_;
  int next_id_ = 1;
};

/// Relocalization then next-frame association for every frame in increasing
/// frame order (relocalization also runs on the last frame).
/// Throws MissingCamera for a frame with detections but no camera.
TrackingResult run(std::span<const FrameDetections> seq, const CameraSet& cams,
                   const TrackerConfig& cfg);

/// Boxes of every identified track, labeled with the track id, sorted by
/// frame then id.
LabeledBoxes labeled_output(const TrackingResult& result);

/// Keeps each box iff an independent uniform draw in (0, 1] is <= rate.
std::vector<FrameDetections> degrade_detections(std::span<const FrameDetections> gt, double rate,
                                                std::uint64_t seed);

}  // namespace orchard
