#pragma once

// Serializers from DisplayList to plotter and display formats, and an HP-GL
// reader that recovers the pen trajectory of a document.

#include <string>
#include <string_view>
#include <vector>

#include "penplot/geometry.hpp"
#include "penplot/plot_core.hpp"

namespace penplot {

struct PageSetup {
  double width_mm = 254.0;
  double height_mm = 190.5;
  double margin_mm = 5.0;

  // Device-mm rectangle available to drawings, origin at the lower-left margin.
  Rect drawable() const;
  bool valid() const;
};

inline constexpr double kPlotterUnitsPerMm = 40.0;
inline constexpr int kMaxPlotterUnit = 32767;

// HP-GL statements, each including its ';' terminator.
struct HpglDocument {
  std::vector<std::string> statements;

  // All statements concatenated.
  std::string compact() const;
  // One statement per line; the on-disk form.
  std::string text() const;
};

// Builds an HpglDocument, merging consecutive PU (or PD) coordinate pairs
// into a single statement.
class HpglBuilder {
 public:
  void pen_up(int x, int y) { pair("PU", x, y); }
  void pen_down(int x, int y) { pair("PD", x, y); }
  void statement(std::string s);
  HpglDocument finish();

 private:
  void pair(std::string_view verb, int x, int y);
  void flush();

  HpglDocument doc_;
  std::string pending_;
  std::string_view pending_verb_;
};

HpglDocument emit_hpgl(const DisplayList& list, const PageSetup& page = {});

std::string emit_svg(const DisplayList& list, const PageSetup& page = {});

// Stroke colours for pens 1..8, shared by the SVG backend and the viewer.
const std::vector<std::string>& pen_colors();

// A pen-down polyline. Coordinates in millimeters.
struct PenStroke {
  int pen = 1;
  std::vector<Point2> vertices;

  friend bool operator==(const PenStroke&, const PenStroke&) = default;
};

using Trajectory = std::vector<PenStroke>;

// Down-pen trajectory of a DisplayList. A Marker is a zero-length stroke.
Trajectory trajectory(const DisplayList& list);

// Interprets IN/SP/PU/PD/PA statements. Coordinates are returned in mm
// relative to the plotter origin (units / 40). Throws parse_error on
// malformed input or unsupported verbs.
Trajectory interpret_hpgl(std::string_view text);

// Largest vertex distance between two trajectories with identical shape
// (stroke count, pens and vertex counts); +infinity when the shapes differ.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

Trajectory translate_trajectory(Trajectory t, Point2 offset);

}  // namespace penplot
