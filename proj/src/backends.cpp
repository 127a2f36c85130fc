#include "penplot/backends.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "penplot/error.hpp"

namespace penplot {

Rect PageSetup::drawable() const {
  return {{0.0, 0.0}, {width_mm - 2 * margin_mm, height_mm - 2 * margin_mm}};
}

bool PageSetup::valid() const {
  return std::isfinite(width_mm) && std::isfinite(height_mm) &&
         std::isfinite(margin_mm) && margin_mm >= 0.0 &&
         width_mm - 2 * margin_mm > 0.0 && height_mm - 2 * margin_mm > 0.0;
}

std::string HpglDocument::compact() const {
  std::string out;
  for (const auto& s : statements) out += s;
  return out;
}

std::string HpglDocument::text() const {
  std::string out;
  for (const auto& s : statements) {
    out += s;
    out += '\n';
  }
  return out;
}

namespace {

void check_page(const PageSetup& page) {
  if (!page.valid()) {
    throw Error(Errc::validation, "page setup leaves no drawable area");
  }
}

void check_fits(const DisplayList& list, const PageSetup& page) {
  const Rect area = page.drawable();
  for (const auto& cmd : list.commands) {
    auto p = command_point(cmd);
    if (p && !area.contains(*p)) {
      throw Error(Errc::page_overflow,
                  "display list extends beyond the drawable page area");
    }
  }
}

int to_plotter_units(double mm) {
  const double units = std::round(mm * kPlotterUnitsPerMm);
  if (!(units >= 0.0 && units <= kMaxPlotterUnit)) {
    throw Error(Errc::page_overflow, "coordinate outside the HP-GL range");
  }
  return static_cast<int>(units);
}

}  // namespace

void HpglBuilder::pair(std::string_view verb, int x, int y) {
  if (pending_verb_ != verb) flush();
  if (pending_.empty()) {
    pending_ = verb;
    pending_verb_ = verb;
  } else {
    pending_ += ',';
  }
  pending_ += std::to_string(x);
  pending_ += ',';
  pending_ += std::to_string(y);
}

void HpglBuilder::statement(std::string s) {
  flush();
  doc_.statements.push_back(std::move(s));
}

void HpglBuilder::flush() {
  if (pending_.empty()) return;
  doc_.statements.push_back(pending_ + ";");
  pending_.clear();
  pending_verb_ = {};
}

HpglDocument HpglBuilder::finish() {
  flush();
  return std::move(doc_);
}

HpglDocument emit_hpgl(const DisplayList& list, const PageSetup& page) {
  check_page(page);
  check_fits(list, page);

  HpglBuilder out;
  out.statement("IN;");
  out.statement("SP1;");
  auto ux = [&](Point2 p) { return to_plotter_units(p.x + page.margin_mm); };
  auto uy = [&](Point2 p) { return to_plotter_units(p.y + page.margin_mm); };
  for (const auto& cmd : list.commands) {
    if (const auto* m = std::get_if<MoveTo>(&cmd)) {
      out.pen_up(ux(m->p), uy(m->p));
    } else if (const auto* l = std::get_if<LineTo>(&cmd)) {
      out.pen_down(ux(l->p), uy(l->p));
    } else if (const auto* k = std::get_if<Marker>(&cmd)) {
      out.pen_up(ux(k->p), uy(k->p));
      out.pen_down(ux(k->p), uy(k->p));
    } else if (const auto* pen = std::get_if<SelectPen>(&cmd)) {
      out.statement("SP" + std::to_string(pen->id) + ";");
    }
  }
  out.statement("PU;");
  out.statement("SP0;");
  return out.finish();
}

const std::vector<std::string>& pen_colors() {
  static const std::vector<std::string> colors{
      "#000000", "#d62728", "#2ca02c", "#1f77b4",
      "#9467bd", "#17becf", "#ff7f0e", "#8c564b"};
  return colors;
}

namespace {

std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string emit_svg(const DisplayList& list, const PageSetup& page) {
  check_page(page);
  const double m = page.margin_mm;
  auto coord = [&](Point2 p) {
    return fixed3(p.x + m) + " " + fixed3(page.height_mm - (p.y + m));
  };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed3(page.width_mm) +
         "mm\" height=\"" + fixed3(page.height_mm) + "mm\" viewBox=\"0 0 " +
         fixed3(page.width_mm) + " " + fixed3(page.height_mm) + "\">\n";
  out += "<style>path{fill:none;stroke-width:0.35;stroke-linecap:round;"
         "stroke-linejoin:round}";
  for (std::size_t i = 0; i < pen_colors().size(); ++i) {
    out += ".pen" + std::to_string(i + 1) + "{stroke:" + pen_colors()[i] + "}";
  }
  out += "</style>\n";

  int pen = 1;
  Point2 position{};
  std::string path;
  auto close = [&] {
    if (path.empty()) return;
    out += "<path class=\"pen" + std::to_string(pen) + "\" d=\"" + path + "\"/>\n";
    path.clear();
  };

  for (const auto& cmd : list.commands) {
    if (const auto* mv = std::get_if<MoveTo>(&cmd)) {
      close();
      position = mv->p;
    } else if (const auto* l = std::get_if<LineTo>(&cmd)) {
      if (path.empty()) path = "M " + coord(position);
      path += " L " + coord(l->p);
      position = l->p;
    } else if (const auto* k = std::get_if<Marker>(&cmd)) {
      close();
      path = "M " + coord(k->p) + " L " + coord(k->p);
      close();
      position = k->p;
    } else if (const auto* sp = std::get_if<SelectPen>(&cmd)) {
      close();
      pen = sp->id;
    } else if (const auto* frame = std::get_if<BeginFrame>(&cmd)) {
      close();
      out += "<g data-frame=\"" + xml_escape(frame->name) + "\">\n";
    } else if (std::holds_alternative<EndFrame>(cmd)) {
      close();
      out += "</g>\n";
    }
  }
  close();
  out += "</svg>\n";
  return out;
}

namespace {

// Pen-plotter state shared by both trajectory readers so that DisplayList and
// HP-GL are interpreted identically.
class PenTracker {
 public:
  void select(int pen) {
    close();
    pen_ = pen;
  }
  void up(Point2 p) {
    close();
    down_ = false;
    position_ = p;
  }
  void raise() {
    close();
    down_ = false;
  }
  void down(Point2 p) {
    down_ = true;
    if (!open_) {
      open_ = PenStroke{pen_, {position_}};
    }
    open_->vertices.push_back(p);
    position_ = p;
  }
  void lower() { down_ = true; }
  void to(Point2 p) {
    if (down_) {
      down(p);
    } else {
      up(p);
    }
  }
  void reset() {
    close();
    position_ = {};
    down_ = false;
  }
  Trajectory finish() {
    close();
    return std::move(out_);
  }

 private:
  void close() {
    if (open_) out_.push_back(std::move(*open_));
    open_.reset();
  }

  int pen_ = 1;
  bool down_ = false;
  Point2 position_{};
  std::optional<PenStroke> open_;
  Trajectory out_;
};

}  // namespace

Trajectory trajectory(const DisplayList& list) {
  PenTracker pen;
  for (const auto& cmd : list.commands) {
    if (const auto* m = std::get_if<MoveTo>(&cmd)) {
      pen.up(m->p);
    } else if (const auto* l = std::get_if<LineTo>(&cmd)) {
      pen.down(l->p);
    } else if (const auto* k = std::get_if<Marker>(&cmd)) {
      pen.up(k->p);
      pen.down(k->p);
    } else if (const auto* sp = std::get_if<SelectPen>(&cmd)) {
      pen.select(sp->id);
    }
  }
  return pen.finish();
}

Trajectory interpret_hpgl(std::string_view text) {
  PenTracker pen;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(';', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::size_t start = pos;
    std::string_view stmt = text.substr(pos, end - pos);
    pos = end + 1;

    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    stmt = trim(stmt);
    if (stmt.empty()) continue;
    if (stmt.size() < 2) throw Error(Errc::parse_error, "truncated HP-GL statement", start);
    std::string verb{stmt.substr(0, 2)};
    for (auto& c : verb) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));

    std::vector<long> params;
    std::string_view rest = trim(stmt.substr(2));
    while (!rest.empty()) {
      long value = 0;
      auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
      if (ec != std::errc{}) {
        throw Error(Errc::parse_error, "bad HP-GL parameter in " + verb, start);
      }
      params.push_back(value);
      rest.remove_prefix(static_cast<std::size_t>(ptr - rest.data()));
      rest = trim(rest);
      if (!rest.empty()) {
        if (rest.front() != ',') throw Error(Errc::parse_error, "expected ',' in " + verb, start);
        rest.remove_prefix(1);
        rest = trim(rest);
        if (rest.empty()) throw Error(Errc::parse_error, "trailing ',' in " + verb, start);
      }
    }

    auto pairs = [&](auto&& fn) {
      if (params.size() % 2 != 0) {
        throw Error(Errc::parse_error, "odd coordinate count in " + verb, start);
      }
      for (std::size_t i = 0; i < params.size(); i += 2) {
        fn(Point2{params[i] / kPlotterUnitsPerMm, params[i + 1] / kPlotterUnitsPerMm});
      }
    };

    if (verb == "IN") {
      pen.reset();
    } else if (verb == "SP") {
      pen.select(params.empty() ? 0 : static_cast<int>(params[0]));
    } else if (verb == "PU") {
      pen.raise();
      pairs([&](Point2 p) { pen.up(p); });
    } else if (verb == "PD") {
      pen.lower();
      pairs([&](Point2 p) { pen.down(p); });
    } else if (verb == "PA") {
      pairs([&](Point2 p) { pen.to(p); });
    } else {
      throw Error(Errc::parse_error, "unsupported HP-GL verb " + verb, start);
    }
  }
  return pen.finish();
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  if (a.size() != b.size()) return kInf;
  double worst = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (a[s].pen != b[s].pen || a[s].vertices.size() != b[s].vertices.size()) return kInf;
    for (std::size_t v = 0; v < a[s].vertices.size(); ++v) {
      const Point2 d = a[s].vertices[v] - b[s].vertices[v];
      worst = std::max(worst, std::hypot(d.x, d.y));
    }
  }
  return worst;
}

Trajectory translate_trajectory(Trajectory t, Point2 offset) {
  for (auto& stroke : t) {
    for (auto& v : stroke.vertices) v = v + offset;
  }
  return t;
}

}  // namespace penplot
