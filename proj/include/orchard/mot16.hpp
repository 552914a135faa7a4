#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "orchard/labels.hpp"
#include "orchard/tracker.hpp"

namespace orchard {

/// One MOT16 line. Raw detections carry id -1 and the detector score in conf.
struct Mot16Row {
  int frame = 1;
  int id = -1;
  double left = 0, top = 0, width = 0, height = 0;
  double conf = 1.0;
  int cls = 1;
  double visibility = 1.0;
  friend bool operator==(const Mot16Row&, const Mot16Row&) = default;
};

/// Accepts 7 to 10 comma-separated fields per line: class and visibility
/// default to 1. A 10-field line is the MOTChallenge detection layout
/// (conf then world x,y,z), whose last three fields are ignored.
/// Throws ParseError with the line number and NegativeDimensions.
std::vector<Mot16Row> read_mot16(std::istream& in);
std::vector<Mot16Row> read_mot16(const std::filesystem::path& path);

/// Writes rows ordered by (frame, id), stable for equal keys, with every real
/// at 6 significant digits.
void write_mot16(std::ostream& out, std::span<const Mot16Row> rows);
void write_mot16(const std::filesystem::path& path, std::span<const Mot16Row> rows);

LabeledBoxes to_labeled(std::span<const Mot16Row> rows);
std::vector<Mot16Row> to_rows(const LabeledBoxes& boxes);

/// Boxes grouped per frame, ids ignored, frames ascending. Only frames that
/// appear in `rows` are listed.
std::vector<FrameDetections> to_detections(std::span<const Mot16Row> rows);
/// Detection rows (id -1, conf 1).
std::vector<Mot16Row> detection_rows(std::span<const FrameDetections> frames);

}  // namespace orchard
