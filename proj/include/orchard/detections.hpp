#pragma once

#include <span>
#include <vector>

#include "orchard/geometry.hpp"
#include "orchard/sphere.hpp"

namespace orchard {

struct ScoredBox {
  BoundingBox box;
  double score = 1.0;
  friend bool operator==(const ScoredBox&, const ScoredBox&) = default;
};

/// Greedy non-maximum suppression: boxes in descending score order, each
/// dropped when its IoU with an already kept box exceeds `iou_threshold`.
/// Equal scores keep input order. Output is in descending score order.
std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes, double iou_threshold = 0.2);

struct TileOffset {
  double x = 0;
  double y = 0;
};

/// Shifts tile-local boxes by their tile offsets into frame coordinates and
/// suppresses duplicates across tiles. Throws OffsetOutOfFrame for an offset
/// outside the frame and InvalidConfig when the counts differ.
std::vector<ScoredBox> merge_tiles(std::span<const std::vector<ScoredBox>> tiles, std::span<const TileOffset> offsets,
                                   const ImageSize& frame, double iou_threshold = 0.2);

/// Top-left offsets of square tiles covering the frame with the given overlap;
/// the last row and column are pulled back to end at the frame border.
std::vector<TileOffset> tile_grid(const ImageSize& frame, double tile = 416, double overlap = 82);

struct SampledFrame {
  int source = 0;  // original frame index
  int index = 0;   // sequential index from 1
  friend bool operator==(const SampledFrame&, const SampledFrame&) = default;
};

/// Every stride-th frame starting with the first, re-indexed 1, 2, ...
/// Throws InvalidConfig for stride < 1.
std::vector<SampledFrame> stride_sample(std::span<const int> frames, int stride);

}  // namespace orchard
