#include "orchard/detections.hpp"

#include <algorithm>
#include <numeric>

#include "orchard/errors.hpp"

namespace orchard {

std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes, double iou_threshold) {
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return boxes[a].score > boxes[b].score; });
  std::vector<ScoredBox> kept;
  for (std::size_t i : order) {
    const bool suppressed = std::any_of(kept.begin(), kept.end(), [&](const ScoredBox& k) {
      return iou(k.box, boxes[i].box) > iou_threshold;
    });
    if (!suppressed) kept.push_back(boxes[i]);
  }
  return kept;
}

std::vector<ScoredBox> merge_tiles(std::span<const std::vector<ScoredBox>> tiles, std::span<const TileOffset> offsets,
                                   const ImageSize& frame, double iou_threshold) {
  if (tiles.size() != offsets.size()) throw InvalidConfig("one offset per tile is required");
  std::vector<ScoredBox> all;
  for (std::size_t t = 0; t < tiles.size(); ++t) {
    const TileOffset& o = offsets[t];
    if (o.x < 0 || o.y < 0 || o.x >= frame.width || o.y >= frame.height) {
      throw OffsetOutOfFrame("tile " + std::to_string(t) + " offset (" + std::to_string(o.x) + ", " +
                             std::to_string(o.y) + ") lies outside the frame");
    }
    for (ScoredBox b : tiles[t]) {
      b.box.x += o.x;
      b.box.y += o.y;
      all.push_back(b);
    }
  }
  return nms(all, iou_threshold);
}

std::vector<TileOffset> tile_grid(const ImageSize& frame, double tile, double overlap) {
  if (!(tile > 0) || overlap < 0 || overlap >= tile) throw InvalidConfig("need tile > overlap >= 0");
  auto starts = [&](double extent) {
    std::vector<double> out{0};
    while (out.back() + tile < extent) out.push_back(std::min(out.back() + tile - overlap, extent - tile));
    return out;
  };
  std::vector<TileOffset> out;
  for (double y : starts(frame.height)) {
    for (double x : starts(frame.width)) out.push_back({x, y});
  }
  return out;
}

std::vector<SampledFrame> stride_sample(std::span<const int> frames, int stride) {
  if (stride < 1) throw InvalidConfig("stride must be >= 1");
  std::vector<SampledFrame> out;
  for (std::size_t i = 0; i < frames.size(); i += static_cast<std::size_t>(stride)) {
    out.push_back({frames[i], static_cast<int>(out.size()) + 1});
  }
  return out;
}

}  // namespace orchard
