#include "penplot/plot_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "penplot/error.hpp"

namespace penplot {

bool Window::valid() const {
  auto finite = [](Point2 p) { return p.finite(); };
  if (!finite(user_min) || !finite(user_max) || !finite(device_min) ||
      !finite(device_max)) {
    return false;
  }
  return user_max.x > user_min.x && user_max.y > user_min.y &&
         device_max.x > device_min.x && device_max.y > device_min.y;
}

std::optional<Point2> command_point(const PlotCommand& cmd) {
  if (const auto* m = std::get_if<MoveTo>(&cmd)) return m->p;
  if (const auto* l = std::get_if<LineTo>(&cmd)) return l->p;
  if (const auto* k = std::get_if<Marker>(&cmd)) return k->p;
  return std::nullopt;
}

Rect compute_bbox(const std::vector<PlotCommand>& commands) {
  bool any = false;
  Rect box;
  for (const auto& cmd : commands) {
    auto p = command_point(cmd);
    if (!p) continue;
    if (!any) {
      box = {*p, *p};
      any = true;
      continue;
    }
    box.min.x = std::min(box.min.x, p->x);
    box.min.y = std::min(box.min.y, p->y);
    box.max.x = std::max(box.max.x, p->x);
    box.max.y = std::max(box.max.y, p->y);
  }
  return box;
}

std::optional<std::string> validate(const DisplayList& list) {
  bool in_frame = false;
  bool positioned = false;
  for (std::size_t i = 0; i < list.commands.size(); ++i) {
    const auto& cmd = list.commands[i];
    const std::string at = " at command " + std::to_string(i);
    if (auto p = command_point(cmd)) {
      if (!p->finite()) return "non-finite coordinate" + at;
      if (!list.bbox.contains(*p)) return "coordinate outside bbox" + at;
    }
    if (std::holds_alternative<MoveTo>(cmd)) {
      positioned = true;
    } else if (std::holds_alternative<LineTo>(cmd)) {
      if (!positioned) return "LineTo without preceding MoveTo" + at;
    } else if (const auto* pen = std::get_if<SelectPen>(&cmd)) {
      if (pen->id < 1 || pen->id > 8) return "pen id out of range" + at;
    } else if (std::holds_alternative<BeginFrame>(cmd)) {
      if (in_frame) return "nested frame" + at;
      in_frame = true;
      positioned = false;
    } else if (std::holds_alternative<EndFrame>(cmd)) {
      if (!in_frame) return "EndFrame without BeginFrame" + at;
      in_frame = false;
      positioned = false;
    }
  }
  if (in_frame) return std::string("unterminated frame");
  return std::nullopt;
}

Point2 user_to_device(const Window& w, double factor, Point2 origin, Point2 p) {
  const double ux = origin.x + factor * p.x;
  const double uy = origin.y + factor * p.y;
  return {w.device_min.x + (ux - w.user_min.x) / (w.user_max.x - w.user_min.x) *
                               (w.device_max.x - w.device_min.x),
          w.device_min.y + (uy - w.user_min.y) / (w.user_max.y - w.user_min.y) *
                               (w.device_max.y - w.device_min.y)};
}

namespace {

constexpr int kInside = 0;
constexpr int kLeft = 1;
constexpr int kRight = 2;
constexpr int kBottom = 4;
constexpr int kTop = 8;

int outcode(Point2 p, const Rect& r) {
  int code = kInside;
  if (p.x < r.min.x) {
    code |= kLeft;
  } else if (p.x > r.max.x) {
    code |= kRight;
  }
  if (p.y < r.min.y) {
    code |= kBottom;
  } else if (p.y > r.max.y) {
    code |= kTop;
  }
  return code;
}

}  // namespace

std::optional<std::pair<Point2, Point2>> clip_segment(Point2 a, Point2 b,
                                                      const Rect& rect) {
  int code_a = outcode(a, rect);
  int code_b = outcode(b, rect);
  // Each endpoint needs at most two edge intersections.
  for (int iteration = 0; iteration <= 4; ++iteration) {
    if ((code_a | code_b) == 0) return std::make_pair(a, b);
    if ((code_a & code_b) != 0) return std::nullopt;
    if (iteration == 4) break;

    const int out = code_a != 0 ? code_a : code_b;
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    Point2 p;
    if (out & kTop) {
      p = {a.x + dx * (rect.max.y - a.y) / dy, rect.max.y};
    } else if (out & kBottom) {
      p = {a.x + dx * (rect.min.y - a.y) / dy, rect.min.y};
    } else if (out & kRight) {
      p = {rect.max.x, a.y + dy * (rect.max.x - a.x) / dx};
    } else {
      p = {rect.min.x, a.y + dy * (rect.min.x - a.x) / dx};
    }
    if (out == code_a) {
      a = p;
      code_a = outcode(a, rect);
    } else {
      b = p;
      code_b = outcode(b, rect);
    }
  }
  return std::nullopt;
}

PlotContext::PlotContext(const Window& window) : window_(window) {
  if (!window.valid()) {
    throw Error(Errc::invalid_window,
                "window must have positive user and device extents");
  }
  pen_device_ = user_to_device(window_, factor_, origin_, {0.0, 0.0});
}

void PlotContext::require_open() const {
  if (sealed_) throw Error(Errc::sealed_context, "plot context is sealed");
}

void PlotContext::plot(double x, double y, PenCode pen) {
  require_open();
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw Error(Errc::invalid_coordinate, "coordinates must be finite");
  }
  const int magnitude = std::abs(pen.code);
  if (magnitude != 2 && magnitude != 3) {
    throw Error(Errc::invalid_pen_code,
                "pen code must be +-2 or +-3, got " + std::to_string(pen.code));
  }

  const Point2 absolute{origin_.x + factor_ * x, origin_.y + factor_ * y};
  const Point2 device = user_to_device(window_, factor_, origin_, {x, y});
  const Rect rect = window_.device_rect();

  if (magnitude == 3) {
    if (rect.contains(device)) {
      commands_.emplace_back(MoveTo{device});
      emitted_ = device;
    } else {
      emitted_.reset();
    }
  } else {
    auto clipped = clip_segment(pen_device_, device, rect);
    if (!clipped) {
      emitted_.reset();
    } else if (clipped->first == clipped->second) {
      // A zero-length draw dots the paper; a corner graze draws nothing.
      if (pen_device_ == device) commands_.emplace_back(Marker{device});
      emitted_.reset();
    } else {
      if (emitted_ != clipped->first) {
        commands_.emplace_back(MoveTo{clipped->first});
      }
      commands_.emplace_back(LineTo{clipped->second});
      emitted_ = clipped->second;
    }
  }

  pen_device_ = device;
  pen_user_ = absolute;
  pen_down_ = magnitude == 2;
  if (pen.code < 0) origin_ = absolute;
}

void PlotContext::set_factor(double s) {
  require_open();
  if (!std::isfinite(s) || s <= 0.0) {
    throw Error(Errc::invalid_factor, "factor must be positive and finite");
  }
  factor_ = s;
}

void PlotContext::select_pen(int id) {
  require_open();
  if (id < 1 || id > 8) {
    throw Error(Errc::invalid_pen, "pen id must be in 1..8");
  }
  commands_.emplace_back(SelectPen{id});
}

void PlotContext::begin_frame(std::string name) {
  require_open();
  if (in_frame_) throw Error(Errc::frame_nesting, "frames do not nest");
  commands_.emplace_back(BeginFrame{std::move(name)});
  in_frame_ = true;
  emitted_.reset();
}

void PlotContext::end_frame() {
  require_open();
  if (!in_frame_) throw Error(Errc::frame_nesting, "no open frame");
  commands_.emplace_back(EndFrame{});
  in_frame_ = false;
  emitted_.reset();
}

DisplayList PlotContext::finalize() {
  require_open();
  if (in_frame_) end_frame();
  sealed_ = true;
  DisplayList list;
  list.commands = std::move(commands_);
  list.bbox = compute_bbox(list.commands);
  commands_.clear();
  return list;
}

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_window: return "invalid-window";
    case Errc::invalid_coordinate: return "invalid-coordinate";
    case Errc::invalid_pen_code: return "invalid-pen-code";
    case Errc::invalid_factor: return "invalid-factor";
    case Errc::invalid_pen: return "invalid-pen";
    case Errc::sealed_context: return "sealed-context";
    case Errc::frame_nesting: return "frame-nesting";
    case Errc::invalid_grid: return "invalid-grid";
    case Errc::non_finite_sample: return "non-finite-sample";
    case Errc::behind_eye: return "behind-eye";
    case Errc::page_overflow: return "page-overflow";
    case Errc::parse_error: return "parse-error";
    case Errc::missing_init: return "missing-init";
    case Errc::range_error: return "range-error";
    case Errc::syntax_error: return "syntax-error";
    case Errc::not_found: return "not-found";
    case Errc::validation: return "validation";
    case Errc::capacity: return "capacity";
  }
  return "unknown";
}

}  // namespace penplot
