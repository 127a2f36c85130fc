#pragma once

// Device-independent pen-drawing kernel.
//
// User coordinates pass through the classic PLOT state (origin offset and
// global factor) and an affine window map onto device millimeters, get
// clipped to the device rectangle, and accumulate as a DisplayList that the
// HP-GL and SVG backends serialize.

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "penplot/geometry.hpp"

namespace penplot {

// Pen codes follow the CalComp convention: 2 draws, 3 moves, and a negative
// code re-origins the user frame at the target point after the move/draw.
struct PenCode {
  int code = 3;

  static constexpr PenCode draw() { return {2}; }
  static constexpr PenCode move() { return {3}; }
  static constexpr PenCode draw_reorigin() { return {-2}; }
  static constexpr PenCode move_reorigin() { return {-3}; }
};

struct Window {
  Point2 user_min;
  Point2 user_max;
  Point2 device_min;
  Point2 device_max;

  Rect device_rect() const { return {device_min, device_max}; }
  bool valid() const;
};

struct MoveTo {
  Point2 p;
  friend bool operator==(const MoveTo&, const MoveTo&) = default;
};
struct LineTo {
  Point2 p;
  friend bool operator==(const LineTo&, const LineTo&) = default;
};
struct Marker {
  Point2 p;
  friend bool operator==(const Marker&, const Marker&) = default;
};
struct SelectPen {
  int id = 1;
  friend bool operator==(const SelectPen&, const SelectPen&) = default;
};
struct BeginFrame {
  std::string name;
  friend bool operator==(const BeginFrame&, const BeginFrame&) = default;
};
struct EndFrame {
  friend bool operator==(const EndFrame&, const EndFrame&) = default;
};

using PlotCommand =
    std::variant<MoveTo, LineTo, Marker, SelectPen, BeginFrame, EndFrame>;

struct DisplayList {
  std::vector<PlotCommand> commands;
  Rect bbox;  // (0,0)-(0,0) when no command carries a coordinate

  friend bool operator==(const DisplayList&, const DisplayList&) = default;
};

// Coordinate of a MoveTo/LineTo/Marker; nullopt for the other commands.
std::optional<Point2> command_point(const PlotCommand& cmd);

Rect compute_bbox(const std::vector<PlotCommand>& commands);

// Checks the DisplayList invariants. Returns a description of the first
// violation, or nullopt when the list is well formed.
std::optional<std::string> validate(const DisplayList& list);

Point2 user_to_device(const Window& window, double factor, Point2 origin,
                      Point2 p);

// Cohen-Sutherland clip, boundary inclusive. Returns the part of ab inside
// rect, or nullopt when the segment misses it.
std::optional<std::pair<Point2, Point2>> clip_segment(Point2 a, Point2 b,
                                                      const Rect& rect);

class PlotContext {
 public:
  explicit PlotContext(const Window& window);

  void plot(double x, double y, PenCode pen);
  void move(double x, double y) { plot(x, y, PenCode::move()); }
  void draw(double x, double y) { plot(x, y, PenCode::draw()); }

  void set_factor(double s);
  void select_pen(int id);
  void begin_frame(std::string name);
  void end_frame();

  // Seals the context; any later call throws sealed_context.
  DisplayList finalize();

  const Window& window() const { return window_; }
  double factor() const { return factor_; }
  Point2 origin_offset() const { return origin_; }
  Point2 pen_position() const { return pen_user_; }
  bool pen_down() const { return pen_down_; }
  bool sealed() const { return sealed_; }
  const std::vector<PlotCommand>& commands() const { return commands_; }

 private:
  void require_open() const;

  Window window_;
  double factor_ = 1.0;
  Point2 origin_{};
  Point2 pen_user_{};     // absolute user coordinates of the pen
  Point2 pen_device_{};   // unclipped device image of the pen
  std::optional<Point2> emitted_;  // where the last emitted command left the pen
  bool pen_down_ = false;
  bool in_frame_ = false;
  bool sealed_ = false;
  std::vector<PlotCommand> commands_;
};

}  // namespace penplot
