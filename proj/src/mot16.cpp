#include "orchard/mot16.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "orchard/errors.hpp"

namespace orchard {

namespace {

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

double to_real(const std::string& s, std::size_t line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (s.empty() || used != s.size() || !std::isfinite(v)) throw ParseError(where(line) + "bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s, std::size_t line) {
  const double v = to_real(s, line);
  if (std::floor(v) != v || std::abs(v) > 2e9) throw ParseError(where(line) + "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

void append_g(std::string& out, double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.6g", v);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

std::vector<Mot16Row> read_mot16(std::istream& in) {
  std::vector<Mot16Row> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    for (auto& s : f) {
      const auto a = s.find_first_not_of(" \t");
      s = a == std::string::npos ? std::string() : s.substr(a, s.find_last_not_of(" \t") - a + 1);
    }
    if (f.size() < 7 || f.size() > 10) {
      throw ParseError(where(line_no) + "expected 7 to 10 fields, got " + std::to_string(f.size()));
    }
    Mot16Row r;
    r.frame = to_int(f[0], line_no);
    r.id = to_int(f[1], line_no);
    r.left = to_real(f[2], line_no);
    r.top = to_real(f[3], line_no);
    r.width = to_real(f[4], line_no);
    r.height = to_real(f[5], line_no);
    r.conf = to_real(f[6], line_no);
    if (f.size() <= 9) {
      if (f.size() >= 8) r.cls = to_int(f[7], line_no);
      if (f.size() == 9) r.visibility = to_real(f[8], line_no);
    }
    if (r.frame < 1) throw ParseError(where(line_no) + "frame must be >= 1");
    if (r.width < 0 || r.height < 0) {
      throw NegativeDimensions(where(line_no) + "width " + f[4] + ", height " + f[5]);
    }
    if (r.visibility < 0 || r.visibility > 1) throw ParseError(where(line_no) + "visibility outside [0, 1]");
    rows.push_back(r);
  }
  return rows;
}

std::vector<Mot16Row> read_mot16(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return read_mot16(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_mot16(std::ostream& out, std::span<const Mot16Row> rows) {
  std::vector<Mot16Row> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Mot16Row& a, const Mot16Row& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
  std::string text;
  for (const auto& r : sorted) {
    text += std::to_string(r.frame);
    text += ',';
    text += std::to_string(r.id);
    for (double v : {r.left, r.top, r.width, r.height, r.conf}) {
      text += ',';
      append_g(text, v);
    }
    text += ',';
    text += std::to_string(r.cls);
    text += ',';
    append_g(text, r.visibility);
    text += '\n';
  }
  out << text;
}

void write_mot16(const std::filesystem::path& path, std::span<const Mot16Row> rows) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  write_mot16(out, rows);
}

LabeledBoxes to_labeled(std::span<const Mot16Row> rows) {
  LabeledBoxes out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.frame, r.id, {r.left, r.top, r.width, r.height}, r.visibility});
  return out;
}

std::vector<Mot16Row> to_rows(const LabeledBoxes& boxes) {
  std::vector<Mot16Row> out;
  out.reserve(boxes.size());
  for (const auto& b : boxes) {
    out.push_back({b.frame, b.track_id, b.box.x, b.box.y, b.box.width, b.box.height, 1.0, 1, b.visibility});
  }
  return out;
}

std::vector<FrameDetections> to_detections(std::span<const Mot16Row> rows) {
  std::map<int, std::vector<BoundingBox>> by_frame;
  for (const auto& r : rows) by_frame[r.frame].push_back({r.left, r.top, r.width, r.height});
  std::vector<FrameDetections> out;
  for (auto& [frame, boxes] : by_frame) out.push_back({frame, std::move(boxes)});
  return out;
}

std::vector<Mot16Row> detection_rows(std::span<const FrameDetections> frames) {
  std::vector<Mot16Row> out;
  for (const auto& f : frames) {
    for (const auto& b : f.boxes) out.push_back({f.frame_index, -1, b.x, b.y, b.width, b.height, 1.0, 1, 1.0});
  }
  return out;
}

}  // namespace orchard
