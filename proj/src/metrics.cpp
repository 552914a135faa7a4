#include "orchard/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>

#include "orchard/assignment.hpp"
#include "orchard/errors.hpp"

namespace orchard {

double AlphaCounts::deta() const {
  const long denom = tp + fn + fp;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double AlphaCounts::assa() const { return tp == 0 ? 0.0 : assoc_sum / static_cast<double>(tp); }

double AlphaCounts::hota() const { return std::sqrt(deta() * assa()); }

double MotaCounts::mota() const {
  if (gt == 0) throw EmptyGroundTruth("MOTA is undefined without ground-truth boxes");
  return 1.0 - static_cast<double>(fn + fp + idsw) / static_cast<double>(gt);
}

double counting_error(int cbyt, int gt) {
  if (gt <= 0) throw ZeroGroundTruth("ground-truth count must be positive");
  return std::abs(static_cast<double>(cbyt - gt)) / static_cast<double>(gt);
}

namespace {

struct Edge {
  std::size_t pred;  // box index
  std::size_t gt;
  double iou;
};

struct Frame {
  std::vector<Edge> edges;  // pairs with IoU > 0
};

// Boxes grouped by frame with ids mapped to dense indices.
struct Problem {
  std::vector<int> pred_id;  // dense id per pred box
  std::vector<int> gt_id;
  std::vector<long> pred_len;  // boxes per dense id
  std::vector<long> gt_len;
  std::vector<Frame> frames;
};

std::vector<int> dense_ids(const LabeledBoxes& boxes, std::vector<long>& lengths, const char* what) {
  std::map<int, int> index;
  for (const auto& b : boxes) index.emplace(b.track_id, 0);
  int next = 0;
  for (auto& [id, i] : index) i = next++;
  lengths.assign(index.size(), 0);
  std::vector<int> out(boxes.size());
  std::set<std::pair<int, int>> seen;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!seen.emplace(boxes[i].frame, boxes[i].track_id).second) {
      throw DuplicateId(std::string(what) + " id " + std::to_string(boxes[i].track_id) + " repeats in frame " +
                        std::to_string(boxes[i].frame));
    }
    out[i] = index.at(boxes[i].track_id);
    ++lengths[static_cast<std::size_t>(out[i])];
  }
  return out;
}

Problem build(const LabeledBoxes& pred, const LabeledBoxes& gt) {
  Problem p;
  p.pred_id = dense_ids(pred, p.pred_len, "prediction");
  p.gt_id = dense_ids(gt, p.gt_len, "ground-truth");
  std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_frame;
  for (std::size_t i = 0; i < pred.size(); ++i) by_frame[pred[i].frame].first.push_back(i);
  for (std::size_t j = 0; j < gt.size(); ++j) by_frame[gt[j].frame].second.push_back(j);
  for (const auto& [frame, idx] : by_frame) {
    Frame f;
    for (std::size_t i : idx.first) {
      for (std::size_t j : idx.second) {
        const double v = iou(pred[i].box, gt[j].box);
        if (v > 0) f.edges.push_back({i, j, v});
      }
    }
    if (!f.edges.empty()) p.frames.push_back(std::move(f));
  }
  return p;
}

// Connected component of the gated pred/gt graph within one frame.
struct Block {
  std::vector<Edge> edges;
  std::size_t n_pred = 0;
  std::size_t n_gt = 0;
  std::vector<std::size_t> local_pred;  // per edge
  std::vector<std::size_t> local_gt;
};

std::vector<Block> blocks_for(const Problem& p, double alpha) {
  std::vector<Block> out;
  for (const Frame& f : p.frames) {
    std::vector<Edge> gated;
    for (const Edge& e : f.edges) {
      if (e.iou >= alpha) gated.push_back(e);
    }
    if (gated.empty()) continue;
    // Union-find over box indices, keyed pred as even and gt as odd.
    std::map<std::size_t, std::size_t> parent;
    auto key_p = [](std::size_t i) { return 2 * i; };
    auto key_g = [](std::size_t j) { return 2 * j + 1; };
    auto find = [&](std::size_t k) {
      while (parent.at(k) != k) k = parent[k] = parent.at(parent.at(k));
      return k;
    };
    for (const Edge& e : gated) {
      parent.emplace(key_p(e.pred), key_p(e.pred));
      parent.emplace(key_g(e.gt), key_g(e.gt));
    }
    for (const Edge& e : gated) {
      const std::size_t a = find(key_p(e.pred));
      const std::size_t b = find(key_g(e.gt));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    std::map<std::size_t, Block> comps;
    for (const Edge& e : gated) comps[find(key_p(e.pred))].edges.push_back(e);
    for (auto& [root, block] : comps) {
      std::map<std::size_t, std::size_t> lp;
      std::map<std::size_t, std::size_t> lg;
      for (const Edge& e : block.edges) {
        lp.emplace(e.pred, lp.size());
        lg.emplace(e.gt, lg.size());
      }
      block.n_pred = lp.size();
      block.n_gt = lg.size();
      for (const Edge& e : block.edges) {
        block.local_pred.push_back(lp.at(e.pred));
        block.local_gt.push_back(lg.at(e.gt));
      }
      out.push_back(std::move(block));
    }
  }
  return out;
}

// Maximum-weight matching over the block's edges; edges with weight <= 0 are
// never chosen. Returns chosen edge indices in increasing order.
std::vector<std::size_t> best_matching(const Block& b, const std::vector<double>& weight) {
  CostMatrix costs(b.n_pred, b.n_gt, 0.0);
  std::vector<std::size_t> edge_at(b.n_pred * b.n_gt, SIZE_MAX);
  for (std::size_t e = 0; e < b.edges.size(); ++e) {
    if (weight[e] <= 0) continue;
    costs(b.local_pred[e], b.local_gt[e]) = -weight[e];
    edge_at[b.local_pred[e] * b.n_gt + b.local_gt[e]] = e;
  }
  std::vector<std::size_t> chosen;
  for (const auto& [r, c] : solve_assignment(costs).pairs) {
    const std::size_t e = edge_at[r * b.n_gt + c];
    if (e != SIZE_MAX) chosen.push_back(e);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

class PairCounts {
 public:
  int get(int g, int p) const {
    const auto it = n_.find(key(g, p));
    return it == n_.end() ? 0 : it->second;
  }
  void add(int g, int p, int delta) { n_[key(g, p)] += delta; }

 private:
  static std::uint64_t key(int g, int p) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g)) << 32) | static_cast<std::uint32_t>(p);
  }
  std::unordered_map<std::uint64_t, int> n_;
};

constexpr double kIouTieBreak = 1e-6;
constexpr double kImprovementTol = 1e-13;
constexpr int kMaxPasses = 100;
constexpr int kMaxDinkelbach = 100;
constexpr std::size_t kMaxStateCells = std::size_t{1} << 24;
constexpr std::size_t kMaxBackPointers = std::size_t{1} << 23;
constexpr std::size_t kMaxSearchWork = std::size_t{1} << 25;

using BlockMatchings = std::vector<std::vector<std::size_t>>;  // chosen edges per block

struct Scorer {
  const Problem& p;
  int gt_of(const Edge& e) const { return p.gt_id[e.gt]; }
  int pred_of(const Edge& e) const { return p.pred_id[e.pred]; }
  double len_sum(int g, int q) const {
    return static_cast<double>(p.gt_len[static_cast<std::size_t>(g)] + p.pred_len[static_cast<std::size_t>(q)]);
  }
  double len_sum(const Edge& e) const { return len_sum(gt_of(e), pred_of(e)); }
};

// n^2 / (G + P - n): the summed A(m) of the n matches of one id pair.
double pair_score(double n, double len_sum) { return n * n / (len_sum - n); }

// All maximal matchings of the block (no edge can be added); an optimum never
// leaves an addable edge because every extra match raises the score.
// Returns false once more than `limit` have been found.
bool maximal_matchings(const Block& b, std::size_t limit, BlockMatchings& out) {
  std::vector<std::vector<std::size_t>> by_pred(b.n_pred);
  for (std::size_t e = 0; e < b.edges.size(); ++e) by_pred[b.local_pred[e]].push_back(e);
  std::vector<char> pred_free(b.n_pred, 1);
  std::vector<char> gt_free(b.n_gt, 1);
  std::vector<std::size_t> current;
  bool ok = true;
  auto recurse = [&](auto&& self, std::size_t row) -> void {
    if (!ok) return;
    if (row == b.n_pred) {
      for (std::size_t e = 0; e < b.edges.size(); ++e) {
        if (pred_free[b.local_pred[e]] && gt_free[b.local_gt[e]]) return;
      }
      if (out.size() >= limit) {
        ok = false;
        return;
      }
      out.push_back(current);
      std::sort(out.back().begin(), out.back().end());
      return;
    }
    for (std::size_t e : by_pred[row]) {
      if (!gt_free[b.local_gt[e]]) continue;
      gt_free[b.local_gt[e]] = 0;
      pred_free[row] = 0;
      current.push_back(e);
      self(self, row + 1);
      current.pop_back();
      pred_free[row] = 1;
      gt_free[b.local_gt[e]] = 1;
    }
    self(self, row + 1);
  };
  recurse(recurse, 0);
  return ok;
}

// Dynamic program over blocks whose state is the vector of per-pair match
// counts. Distinct partial matchings reaching the same counts are merged.
std::optional<BlockMatchings> exact_search(const Scorer& sc, const std::vector<Block>& blocks,
                                           double d, std::size_t budget) {
  if (budget == 0) return std::nullopt;
  std::map<std::pair<int, int>, std::size_t> slot_of;
  std::vector<std::vector<std::size_t>> edge_slot(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (const Edge& e : blocks[k].edges) {
      const auto it = slot_of.emplace(std::make_pair(sc.gt_of(e), sc.pred_of(e)), slot_of.size()).first;
      edge_slot[k].push_back(it->second);
    }
  }
  const std::size_t slots = slot_of.size();
  std::vector<double> slot_len(slots);
  for (const auto& [ids, s] : slot_of) slot_len[s] = sc.len_sum(ids.first, ids.second);

  struct Back {
    std::uint32_t parent;
    std::uint32_t choice;
  };
  std::vector<std::vector<Back>> back(blocks.size());
  std::vector<BlockMatchings> options(blocks.size());
  std::vector<std::uint16_t> layer(slots, 0);  // states packed, `slots` entries each
  std::size_t n_states = 1;
  std::size_t total = 1;
  std::size_t work = 0;  // count-vector entries touched

  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (!maximal_matchings(blocks[k], budget, options[k])) return std::nullopt;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<std::uint16_t> next;
    std::vector<std::uint16_t> state(slots);
    work += n_states * options[k].size() * slots;
    if (work > kMaxSearchWork) return std::nullopt;
    for (std::size_t s = 0; s < n_states; ++s) {
      for (std::size_t c = 0; c < options[k].size(); ++c) {
        std::copy_n(layer.begin() + static_cast<std::ptrdiff_t>(s * slots), slots, state.begin());
        for (std::size_t e : options[k][c]) ++state[edge_slot[k][e]];
        std::string key(reinterpret_cast<const char*>(state.data()), slots * sizeof(std::uint16_t));
        const auto [it, fresh] = index.emplace(std::move(key), static_cast<std::uint32_t>(back[k].size()));
        if (!fresh) continue;
        back[k].push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(c)});
        next.insert(next.end(), state.begin(), state.end());
        if (back[k].size() > budget || back[k].size() * slots > kMaxStateCells ||
            ++total > kMaxBackPointers) {
          return std::nullopt;
        }
      }
    }
    layer = std::move(next);
    n_states = back[k].size();
  }

  std::size_t best = 0;
  double best_value = -1;
  for (std::size_t s = 0; s < n_states; ++s) {
    double score = 0;
    double t = 0;
    for (std::size_t j = 0; j < slots; ++j) {
      const double n = layer[s * slots + j];
      score += pair_score(n, slot_len[j]);
      t += n;
    }
    const double value = score / (d - t);
    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }
  BlockMatchings chosen(blocks.size());
  for (std::size_t k = blocks.size(); k-- > 0;) {
    chosen[k] = options[k][back[k][best].choice];
    best = back[k][best].parent;
  }
  return chosen;
}

BlockMatchings ascent_search(const Scorer& sc, const std::vector<Block>& blocks, double d) {
  // First pass: association potential from every gated pair.
  PairCounts potential;
  for (const Block& b : blocks) {
    for (const Edge& e : b.edges) potential.add(sc.gt_of(e), sc.pred_of(e), 1);
  }
  BlockMatchings chosen(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const Block& b = blocks[k];
    std::vector<double> w(b.edges.size());
    for (std::size_t e = 0; e < w.size(); ++e) {
      const Edge& edge = b.edges[e];
      const double pot = potential.get(sc.gt_of(edge), sc.pred_of(edge));
      w[e] = pot / (sc.len_sum(edge) - pot) + kIouTieBreak * edge.iou;
    }
    chosen[k] = best_matching(b, w);
  }

  // Objective: HOTA_alpha^2 = S / (D - T), S = sum over id pairs of pair_score.
  PairCounts n;
  double s = 0;
  double t = 0;
  auto gain = [&](const Edge& e) {
    const double c = n.get(sc.gt_of(e), sc.pred_of(e));
    return pair_score(c + 1, sc.len_sum(e)) - pair_score(c, sc.len_sum(e));
  };
  auto apply = [&](const Block& b, const std::vector<std::size_t>& m, int sign) {
    for (std::size_t e : m) {
      const Edge& edge = b.edges[e];
      if (sign > 0) {
        s += gain(edge);
        n.add(sc.gt_of(edge), sc.pred_of(edge), 1);
      } else {
        n.add(sc.gt_of(edge), sc.pred_of(edge), -1);
        s -= gain(edge);
      }
      t += sign;
    }
  };
  for (std::size_t k = 0; k < blocks.size(); ++k) apply(blocks[k], chosen[k], +1);

  // Second pass: coordinate ascent, one block at a time. With the rest fixed,
  // a block's best matching maximizes a ratio; Dinkelbach turns it into a
  // sequence of max-weight matchings with weights gain + lambda.
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    bool improved = false;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      const Block& b = blocks[k];
      apply(b, chosen[k], -1);
      std::vector<double> g(b.edges.size());
      for (std::size_t e = 0; e < g.size(); ++e) g[e] = gain(b.edges[e]);
      auto value = [&](const std::vector<std::size_t>& m) {
        double sm = s;
        for (std::size_t e : m) sm += g[e];
        return sm / (d - t - static_cast<double>(m.size()));
      };
      const double old_value = value(chosen[k]);
      double lambda = old_value;
      std::vector<std::size_t> best = chosen[k];
      for (int it = 0; it < kMaxDinkelbach; ++it) {
        std::vector<double> w(g.size());
        for (std::size_t e = 0; e < w.size(); ++e) w[e] = g[e] + lambda;
        std::vector<std::size_t> cand = best_matching(b, w);
        const double v = value(cand);
        if (!(v > lambda + kImprovementTol)) break;
        lambda = v;
        best = std::move(cand);
      }
      if (lambda > old_value + kImprovementTol) {
        chosen[k] = std::move(best);
        improved = true;
      }
      apply(b, chosen[k], +1);
    }
    if (!improved) break;
  }
  return chosen;
}

struct AlphaSolution {
  MatchSet matches;
  AlphaCounts counts;
  bool exact = false;
};

AlphaSolution solve_alpha(const Problem& p, std::size_t n_pred, std::size_t n_gt, double alpha,
                          const MatcherOptions& opts) {
  const Scorer sc{p};
  const std::vector<Block> blocks = blocks_for(p, alpha);
  const double d = static_cast<double>(n_pred + n_gt);
  AlphaSolution out;
  std::optional<BlockMatchings> exact = exact_search(sc, blocks, d, opts.exact_state_budget);
  out.exact = exact.has_value();
  const BlockMatchings chosen = exact ? std::move(*exact) : ascent_search(sc, blocks, d);

  out.matches.alpha = alpha;
  std::vector<char> pred_used(n_pred, 0);
  std::vector<char> gt_used(n_gt, 0);
  std::map<std::pair<int, int>, long> n;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (std::size_t e : chosen[k]) {
      const Edge& edge = blocks[k].edges[e];
      out.matches.tp.emplace_back(edge.pred, edge.gt);
      pred_used[edge.pred] = 1;
      gt_used[edge.gt] = 1;
      ++n[{sc.gt_of(edge), sc.pred_of(edge)}];
    }
  }
  std::sort(out.matches.tp.begin(), out.matches.tp.end());
  for (std::size_t j = 0; j < n_gt; ++j) {
    if (!gt_used[j]) out.matches.fn.push_back(j);
  }
  for (std::size_t i = 0; i < n_pred; ++i) {
    if (!pred_used[i]) out.matches.fp.push_back(i);
  }

  AlphaCounts& c = out.counts;
  c.alpha = alpha;
  c.tp = static_cast<long>(out.matches.tp.size());
  c.fn = static_cast<long>(n_gt) - c.tp;
  c.fp = static_cast<long>(n_pred) - c.tp;
  for (const auto& [ids, count] : n) {
    c.assoc_sum += pair_score(static_cast<double>(count), sc.len_sum(ids.first, ids.second));
  }
  return out;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidAlpha("alpha must lie in (0, 1)");
}

LabeledBoxes visible_gt(const LabeledBoxes& gt, double threshold) {
  LabeledBoxes out;
  for (const auto& b : gt) {
    if (b.visibility >= threshold) out.push_back(b);
  }
  return out;
}

int count_ids(const LabeledBoxes& boxes) {
  std::set<int> ids;
  for (const auto& b : boxes) ids.insert(b.track_id);
  return static_cast<int>(ids.size());
}

void finish(HotaReport& r) {
  r.hota = r.deta = r.assa = 0;
  for (std::size_t a = 0; a < kAlphaCount; ++a) {
    r.deta_alpha[a] = r.counts[a].deta();
    r.assa_alpha[a] = r.counts[a].assa();
    r.hota_alpha[a] = r.counts[a].hota();
    r.hota += r.hota_alpha[a];
    r.deta += r.deta_alpha[a];
    r.assa += r.assa_alpha[a];
  }
  r.hota /= kAlphaCount;
  r.deta /= kAlphaCount;
  r.assa /= kAlphaCount;
  r.mota = r.mota_counts.mota();
  r.counting.error = counting_error(r.counting.cbyt, r.counting.cbyt_gt);
}

}  // namespace

MatchSet match_alpha(const LabeledBoxes& pred, const LabeledBoxes& gt, double alpha,
                     const MatcherOptions& opts) {
  check_alpha(alpha);
  return solve_alpha(build(pred, gt), pred.size(), gt.size(), alpha, opts).matches;
}

AlphaCounts hota_alpha(const LabeledBoxes& pred, const LabeledBoxes& gt, double alpha,
                       const MatcherOptions& opts, bool* exact) {
  check_alpha(alpha);
  AlphaSolution sol = solve_alpha(build(pred, gt), pred.size(), gt.size(), alpha, opts);
  if (exact) *exact = sol.exact;
  return sol.counts;
}

HotaReport hota(const LabeledBoxes& pred, const LabeledBoxes& gt_all, const EvalOptions& opts) {
  const LabeledBoxes gt = visible_gt(gt_all, opts.visibility_threshold);
  if (gt.empty()) throw EmptyGroundTruth("no ground-truth box passes the visibility filter");
  const Problem problem = build(pred, gt);
  const auto alphas = hota_alphas();
  HotaReport r;
  std::array<char, kAlphaCount> exact{};
  for_each_index(opts.execution, kAlphaCount, [&](std::size_t a) {
    AlphaSolution sol = solve_alpha(problem, pred.size(), gt.size(), alphas[a], opts.matcher);
    r.counts[a] = sol.counts;
    exact[a] = sol.exact;
  });
  r.exact = std::all_of(exact.begin(), exact.end(), [](char e) { return e != 0; });
  r.mota_counts = mota_counts(pred, gt, opts.mota_iou);
  r.counting.cbyt = count_ids(pred);
  r.counting.cbyt_gt = count_ids(gt);
  finish(r);
  return r;
}

MotaCounts mota_counts(const LabeledBoxes& pred, const LabeledBoxes& gt, double iou_threshold) {
  std::map<int, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> by_frame;
  for (std::size_t i = 0; i < pred.size(); ++i) by_frame[pred[i].frame].first.push_back(i);
  for (std::size_t j = 0; j < gt.size(); ++j) by_frame[gt[j].frame].second.push_back(j);

  MotaCounts c;
  c.gt = static_cast<long>(gt.size());
  std::map<int, int> last_match;  // gt id -> pred id
  for (const auto& [frame, idx] : by_frame) {
    const auto& [ps, gs] = idx;
    std::vector<char> p_used(ps.size(), 0);
    std::vector<char> g_used(gs.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> matched;  // local (pred, gt)

    // Keep last correspondences that are still valid.
    for (std::size_t gj = 0; gj < gs.size(); ++gj) {
      const auto it = last_match.find(gt[gs[gj]].track_id);
      if (it == last_match.end()) continue;
      for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        if (p_used[pi] || pred[ps[pi]].track_id != it->second) continue;
        if (iou(pred[ps[pi]].box, gt[gs[gj]].box) >= iou_threshold) {
          p_used[pi] = g_used[gj] = 1;
          matched.emplace_back(pi, gj);
        }
        break;
      }
    }

    std::vector<std::size_t> free_p;
    std::vector<std::size_t> free_g;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      if (!p_used[pi]) free_p.push_back(pi);
    }
    for (std::size_t gj = 0; gj < gs.size(); ++gj) {
      if (!g_used[gj]) free_g.push_back(gj);
    }
    CostMatrix costs(free_p.size(), free_g.size(), 0.0);
    for (std::size_t a = 0; a < free_p.size(); ++a) {
      for (std::size_t b = 0; b < free_g.size(); ++b) {
        const double v = iou(pred[ps[free_p[a]]].box, gt[gs[free_g[b]]].box);
        if (v >= iou_threshold) costs(a, b) = -v;
      }
    }
    for (const auto& [a, b] : solve_assignment(costs).pairs) {
      if (costs(a, b) < 0) matched.emplace_back(free_p[a], free_g[b]);
    }

    for (const auto& [pi, gj] : matched) {
      const int gid = gt[gs[gj]].track_id;
      const int pid = pred[ps[pi]].track_id;
      const auto it = last_match.find(gid);
      if (it != last_match.end() && it->second != pid) ++c.idsw;
      last_match[gid] = pid;
    }
    c.fn += static_cast<long>(gs.size() - matched.size());
    c.fp += static_cast<long>(ps.size() - matched.size());
  }
  return c;
}

double mota(const LabeledBoxes& pred, const LabeledBoxes& gt, double iou_threshold) {
  return mota_counts(pred, gt, iou_threshold).mota();
}

HotaReport combine(std::span<const HotaReport> reports) {
  HotaReport r;
  const auto alphas = hota_alphas();
  for (std::size_t a = 0; a < kAlphaCount; ++a) r.counts[a].alpha = alphas[a];
  for (const HotaReport& x : reports) {
    for (std::size_t a = 0; a < kAlphaCount; ++a) {
      r.counts[a].tp += x.counts[a].tp;
      r.counts[a].fn += x.counts[a].fn;
      r.counts[a].fp += x.counts[a].fp;
      r.counts[a].assoc_sum += x.counts[a].assoc_sum;
    }
    r.mota_counts.gt += x.mota_counts.gt;
    r.mota_counts.fn += x.mota_counts.fn;
    r.mota_counts.fp += x.mota_counts.fp;
    r.mota_counts.idsw += x.mota_counts.idsw;
    r.counting.cbyt += x.counting.cbyt;
    r.counting.cbyt_gt += x.counting.cbyt_gt;
    r.exact = r.exact && x.exact;
  }
  if (r.mota_counts.gt == 0) throw EmptyGroundTruth("no sequence has ground-truth boxes");
  finish(r);
  return r;
}

}  // namespace orchard
