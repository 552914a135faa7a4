#include "orchard/tracker.hpp"

#include <algorithm>
#include <string>

#include "orchard/assignment.hpp"
#include "orchard/errors.hpp"
#include "orchard/random.hpp"

namespace orchard {

std::vector<RelocMatch> relocalize(std::span<const Track> tracks, const FrameDetections& dets,
                                   std::span<const char> claimed, const CameraMatrix& cam,
                                   const TrackerConfig& cfg) {
  std::vector<std::size_t> cand_tracks;
  std::vector<BoundingBox> reprojected;
  for (std::size_t t = 0; t < tracks.size(); ++t) {
    const Track& track = tracks[t];
    if (track.state != TrackState::Lost || !track.sphere) continue;
    if (auto box = reproject_sphere(*track.sphere, cam, cfg.f_focal, cfg.image)) {
      cand_tracks.push_back(t);
      reprojected.push_back(*box);
    }
  }
  std::vector<std::size_t> free_boxes;
  std::vector<BoundingBox> free;
  for (std::size_t b = 0; b < dets.boxes.size(); ++b) {
    if (b < claimed.size() && claimed[b]) continue;
    free_boxes.push_back(b);
    free.push_back(dets.boxes[b]);
  }

  std::vector<RelocMatch> out;
  for (const auto& [p, q] : associate_boxes(reprojected, free, cfg.reloc_min_iou).pairs) {
    out.push_back({cand_tracks[p], free_boxes[q]});
  }
  return out;
}

Tracker::Tracker(const CameraSet& cams, TrackerConfig cfg) : cams_(cams), cfg_(std::move(cfg)) {}

void Tracker::begin(FrameDetections first) {
  current_ = std::move(first);
  owners_.assign(current_.boxes.size(), std::nullopt);
}

void Tracker::relocalize_current() {
  if (cfg_.relocalization && !current_.boxes.empty()) {
    const auto cam = cams_.find(current_.frame_index);
    if (cam == cams_.end()) {
      throw MissingCamera("no camera matrix for frame " + std::to_string(current_.frame_index));
    }
    std::vector<char> claimed(owners_.size());
    for (std::size_t b = 0; b < owners_.size(); ++b) claimed[b] = owners_[b].has_value();
    for (const RelocMatch& m : relocalize(tracks_, current_, claimed, cam->second, cfg_)) {
      Track& track = tracks_[m.track];
      track.observations[current_.frame_index] = current_.boxes[m.box];
      track.state = TrackState::Active;
      owners_[m.box] = m.track;
    }
  }
  per_frame_active_[current_.frame_index] = active_count();
}

void Tracker::associate_next(FrameDetections next) {
  std::vector<std::optional<std::size_t>> next_owners(next.boxes.size());
  for (const auto& [p, q] : associate_boxes(current_.boxes, next.boxes).pairs) {
    if (owners_[p]) {
      const std::size_t t = *owners_[p];
      tracks_[t].observations[next.frame_index] = next.boxes[q];
      next_owners[q] = t;
    } else {
      Track fresh;
      fresh.observations[current_.frame_index] = current_.boxes[p];
      fresh.observations[next.frame_index] = next.boxes[q];
      tracks_.push_back(std::move(fresh));
      owners_[p] = tracks_.size() - 1;
      next_owners[q] = tracks_.size() - 1;
    }
  }
  for (Track& track : tracks_) {
    track.state = track.observations.contains(next.frame_index) ? TrackState::Active : TrackState::Lost;
  }
  current_ = std::move(next);
  owners_ = std::move(next_owners);
  reestimate();
}

void Tracker::reestimate() {
  std::vector<std::size_t> due;
  for (std::size_t t = 0; t < tracks_.size(); ++t) {
    const Track& track = tracks_[t];
    if (track.state == TrackState::Active &&
        static_cast<int>(track.observations.size()) > cfg_.ransac.min_track_len) {
      due.push_back(t);
    }
  }
  std::vector<std::optional<SphereEstimate>> estimates(due.size());
  for_each_index(cfg_.execution, due.size(), [&](std::size_t i) {
    estimates[i] = estimate_orange(tracks_[due[i]].observations, cams_, cfg_.f_focal, cfg_.c, cfg_.ransac);
  });
  // A failed re-estimate keeps the previous sphere.
  for (std::size_t i = 0; i < due.size(); ++i) {
    if (!estimates[i]) continue;
    Track& track = tracks_[due[i]];
    track.sphere = std::move(estimates[i]);
    if (!track.id) track.id = next_id_++;
  }
}

int Tracker::active_count() const {
  return static_cast<int>(std::count_if(tracks_.begin(), tracks_.end(),
                                        [](const Track& t) { return t.state == TrackState::Active; }));
}

TrackingResult Tracker::result() const {
  TrackingResult out;
  out.tracks = tracks_;
  out.count = static_cast<int>(std::count_if(tracks_.begin(), tracks_.end(),
                                             [](const Track& t) { return t.sphere.has_value(); }));
  out.per_frame_active = per_frame_active_;
  return out;
}

TrackingResult run(std::span<const FrameDetections> seq, const CameraSet& cams,
                   const TrackerConfig& cfg) {
  std::vector<FrameDetections> frames(seq.begin(), seq.end());
  std::stable_sort(frames.begin(), frames.end(),
                   [](const auto& a, const auto& b) { return a.frame_index < b.frame_index; });
  for (const auto& f : frames) {
    if (!f.boxes.empty() && !cams.contains(f.frame_index)) {
      throw MissingCamera("no camera matrix for frame " + std::to_string(f.frame_index));
    }
  }
  Tracker tracker(cams, cfg);
  if (frames.empty()) return tracker.result();
  tracker.begin(frames.front());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    tracker.relocalize_current();
    if (k + 1 < frames.size()) tracker.associate_next(frames[k + 1]);
  }
  return tracker.result();
}

LabeledBoxes labeled_output(const TrackingResult& result) {
  LabeledBoxes out;
  for (const Track& track : result.tracks) {
    if (!track.id) continue;
    for (const auto& [frame, box] : track.observations) out.push_back({frame, *track.id, box, 1.0});
  }
  std::sort(out.begin(), out.end(), [](const LabeledBox& a, const LabeledBox& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.track_id < b.track_id;
  });
  return out;
}

std::vector<FrameDetections> degrade_detections(std::span<const FrameDetections> gt, double rate,
                                                std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidConfig("detection rate must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<FrameDetections> out;
  out.reserve(gt.size());
  for (const auto& frame : gt) {
    FrameDetections kept{frame.frame_index, {}};
    for (const auto& box : frame.boxes) {
      if (uniform_open_closed(rng) <= rate) kept.boxes.push_back(box);
    }
    out.push_back(std::move(kept));
  }
  return out;
}

}  // namespace orchard
