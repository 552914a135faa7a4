#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "orchard/labels.hpp"
#include "orchard/parallel.hpp"

namespace orchard {

inline constexpr std::size_t kAlphaCount = 19;

/// IoU gates 0.05, 0.10, ..., 0.95.
constexpr std::array<double, kAlphaCount> hota_alphas() {
  std::array<double, kAlphaCount> a{};
  for (std::size_t i = 0; i < kAlphaCount; ++i) a[i] = static_cast<double>(i + 1) * 0.05;
  return a;
}

/// Matching at one IoU gate. Indices refer to the pred and gt inputs.
struct MatchSet {
  double alpha = 0.5;
  std::vector<std::pair<std::size_t, std::size_t>> tp;  // (pred, gt), sorted
  std::vector<std::size_t> fn;                          // unmatched gt
  std::vector<std::size_t> fp;                          // unmatched pred
};

/// Raw counts at one gate. `assoc_sum` is the sum of A(m) over all true
/// positives; it is additive across sequences.
struct AlphaCounts {
  double alpha = 0.5;
  long tp = 0;
  long fn = 0;
  long fp = 0;
  double assoc_sum = 0.0;

  double deta() const;
  double assa() const;  // 0 when there are no true positives
  double hota() const;
};

struct MotaCounts {
  long gt = 0;
  long fn = 0;
  long fp = 0;
  long idsw = 0;
  double mota() const;
};

struct CountingSummary {
  int cbyt = 0;
  int cbyt_gt = 0;
  double error = 0.0;
};

struct HotaReport {
  double hota = 0;
  double deta = 0;
  double assa = 0;
  std::array<double, kAlphaCount> hota_alpha{};
  std::array<double, kAlphaCount> deta_alpha{};
  std::array<double, kAlphaCount> assa_alpha{};
  double mota = 0;
  CountingSummary counting;
  std::array<AlphaCounts, kAlphaCount> counts{};
  MotaCounts mota_counts;
  bool exact = true;  // every gate solved by the exact search
};

struct MatcherOptions {
  /// Largest number of distinct co-occurrence states the exact search may
  /// hold after any frame component. 0 disables it.
  std::size_t exact_state_budget = std::size_t{1} << 15;
};

struct EvalOptions {
  double visibility_threshold = 0.5;  // gt rows below are ignored
  double mota_iou = 0.5;
  MatcherOptions matcher;
  Execution execution = Execution::Parallel;
};

/// HOTA matching at gate `alpha`: per-frame one-to-one with IoU >= alpha,
/// chosen to maximize HOTA at that gate.
///
/// The score only depends on how often each (gt id, pred id) pair is
/// matched, so an exact search over those count states runs first. If it
/// outgrows the state budget, the two-pass rule (global association
/// potential, then per-frame assignment with IoU as tie-break) seeds a
/// coordinate ascent that re-solves one frame component at a time exactly;
/// that result is a local optimum.
/// Throws InvalidAlpha outside (0, 1) and DuplicateId when an id repeats
/// within a frame.
MatchSet match_alpha(const LabeledBoxes& pred, const LabeledBoxes& gt, double alpha,
                     const MatcherOptions& opts = {});

/// Counts of match_alpha. `exact`, when given, reports whether the exact
/// search finished.
AlphaCounts hota_alpha(const LabeledBoxes& pred, const LabeledBoxes& gt, double alpha,
                       const MatcherOptions& opts = {}, bool* exact = nullptr);

/// Full report over the 19 gates plus MOTA and the counting summary.
/// Throws EmptyGroundTruth if no gt row survives the visibility filter.
HotaReport hota(const LabeledBoxes& pred, const LabeledBoxes& gt, const EvalOptions& opts = {});

/// CLEAR MOT counts: matches from the previous frame are kept while their IoU
/// stays >= iou_threshold, the rest are assigned by maximum IoU.
MotaCounts mota_counts(const LabeledBoxes& pred, const LabeledBoxes& gt, double iou_threshold = 0.5);
/// Throws EmptyGroundTruth.
double mota(const LabeledBoxes& pred, const LabeledBoxes& gt, double iou_threshold = 0.5);

/// |cbyt - gt| / gt. Throws ZeroGroundTruth for gt <= 0.
double counting_error(int cbyt, int gt);

/// Pools several sequences: counts are summed, scores recomputed.
HotaReport combine(std::span<const HotaReport> reports);

}  // namespace orchard
