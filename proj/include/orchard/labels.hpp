#pragma once

#include <vector>

#include "orchard/geometry.hpp"

namespace orchard {

/// A box carrying an identity: predicted track id or ground-truth id.
struct LabeledBox {
  int frame = 1;
  int track_id = 1;
  BoundingBox box;
  double visibility = 1.0;
  friend bool operator==(const LabeledBox&, const LabeledBox&) = default;
};

using LabeledBoxes = std::vector<LabeledBox>;

}  // namespace orchard
