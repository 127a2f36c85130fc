#include "penplot/dmp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "penplot/error.hpp"

namespace penplot::dmp {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr long kMaxCoordinate = std::numeric_limits<int>::max();

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Program run() {
    skip_space();
    if (pos_ >= src_.size() || src_[pos_] != ';') {
      throw Error(Errc::missing_init, "DM/PL program must start with ';:'", pos_);
    }
    while (true) {
      skip_space();
      if (pos_ >= src_.size()) break;
      command();
    }
    return std::move(program_);
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  void push(Command cmd, std::size_t start) {
    program_.commands.push_back(cmd);
    program_.spans.push_back({start, pos_ - start});
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    throw Error(Errc::parse_error, what + " at byte " + std::to_string(at), at);
  }

  long number() {
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < src_.size() && is_digit(src_[pos_])) {
      value = value * 10 + (src_[pos_] - '0');
      if (value > kMaxCoordinate) fail("coordinate too large", start);
      ++pos_;
    }
    if (pos_ == start) fail("expected digits", pos_);
    return value;
  }

  void move(std::size_t start) {
    const long x = number();
    if (pos_ >= src_.size() || src_[pos_] != ',') fail("expected ',' in coordinate pair", pos_);
    ++pos_;
    const long y = number();
    push(MoveAbs{x, y}, start);
  }

  void command() {
    const std::size_t start = pos_;
    const char c = src_[pos_];
    if (c == ';') {
      ++pos_;
      if (pos_ >= src_.size() || src_[pos_] != ':') fail("expected ':' after ';'", pos_);
      ++pos_;
      push(Init{}, start);
    } else if (c == 'U') {
      ++pos_;
      push(PenUp{}, start);
    } else if (c == 'D') {
      ++pos_;
      push(PenDown{}, start);
    } else if (c == 'H') {
      ++pos_;
      push(Home{}, start);
    } else if (c == 'P') {
      ++pos_;
      if (pos_ >= src_.size() || !is_digit(src_[pos_])) fail("expected pen digit", pos_);
      const int pen = src_[pos_] - '0';
      if (pen < 1 || pen > 8) {
        throw Error(Errc::range_error,
                    "pen " + std::to_string(pen) + " outside 1..8 at byte " + std::to_string(pos_),
                    pos_);
      }
      ++pos_;
      push(SelectPen{pen}, start);
    } else if (is_digit(c)) {
      move(start);
    } else if (c == ',' && !program_.spans.empty() &&
               std::holds_alternative<MoveAbs>(program_.commands.back()) &&
               program_.spans.back().offset + program_.spans.back().length == start) {
      ++pos_;
      move(start);
    } else {
      fail(std::string("unknown command '") + c + "'", pos_);
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Program program_;
};

void check_program(const Program& program) {
  if (program.commands.empty() || !std::holds_alternative<Init>(program.commands.front())) {
    throw Error(Errc::missing_init, "DM/PL program must start with Init", 0);
  }
}

}  // namespace

Program parse(std::string_view source) { return Parser(source).run(); }

HpglDocument translate(const Program& program, const PageSetup& page,
                       Resolution resolution) {
  check_program(program);
  const double units_per_dmp = resolution.mm_per_unit() * kPlotterUnitsPerMm;
  const long max_x = std::min<long>(kMaxPlotterUnit,
                                    std::lround(std::floor(page.width_mm * kPlotterUnitsPerMm)));
  const long max_y = std::min<long>(kMaxPlotterUnit,
                                    std::lround(std::floor(page.height_mm * kPlotterUnitsPerMm)));

  HpglBuilder out;
  out.statement("IN;");
  out.statement("SP1;");
  bool down = false;
  // Set when the pen is lifted in place; if it comes down again before any
  // pen-up move, a bare PU keeps the two strokes apart.
  bool lifted = false;
  for (std::size_t k = 0; k < program.commands.size(); ++k) {
    const auto& cmd = program.commands[k];
    const std::size_t offset = k < program.spans.size() ? program.spans[k].offset : 0;
    if (std::holds_alternative<Init>(cmd)) {
      if (k > 0) {
        out.statement("IN;");
        out.statement("SP1;");
      }
      down = false;
      lifted = false;
    } else if (std::holds_alternative<PenUp>(cmd)) {
      if (down) lifted = true;
      down = false;
    } else if (std::holds_alternative<PenDown>(cmd)) {
      down = true;
    } else if (const auto* m = std::get_if<MoveAbs>(&cmd)) {
      const double ux = std::round(m->x * units_per_dmp);
      const double uy = std::round(m->y * units_per_dmp);
      if (ux < 0 || uy < 0 || ux > max_x || uy > max_y) {
        throw Error(Errc::page_overflow,
                    "move " + std::to_string(m->x) + "," + std::to_string(m->y) +
                        " at byte " + std::to_string(offset) + " leaves the page",
                    offset);
      }
      if (down) {
        if (lifted) out.statement("PU;");
        out.pen_down(static_cast<int>(ux), static_cast<int>(uy));
      } else {
        out.pen_up(static_cast<int>(ux), static_cast<int>(uy));
      }
      lifted = false;
    } else if (const auto* sp = std::get_if<SelectPen>(&cmd)) {
      out.statement("SP" + std::to_string(sp->pen) + ";");
    } else if (std::holds_alternative<Home>(cmd)) {
      out.pen_up(0, 0);
      down = false;
      lifted = false;
    }
  }
  out.statement("PU;");
  out.statement("SP0;");
  return out.finish();
}

Trajectory trajectory(const Program& program, Resolution resolution) {
  check_program(program);
  const double mm = resolution.mm_per_unit();
  Trajectory out;
  std::optional<PenStroke> open;
  auto close = [&] {
    if (open) out.push_back(std::move(*open));
    open.reset();
  };

  int pen = 1;
  bool down = false;
  Point2 position{};
  for (const auto& cmd : program.commands) {
    if (std::holds_alternative<Init>(cmd)) {
      close();
      pen = 1;
      down = false;
      position = {};
    } else if (std::holds_alternative<PenUp>(cmd)) {
      close();
      down = false;
    } else if (std::holds_alternative<PenDown>(cmd)) {
      down = true;
    } else if (const auto* m = std::get_if<MoveAbs>(&cmd)) {
      const Point2 p{m->x * mm, m->y * mm};
      if (down) {
        if (!open) open = PenStroke{pen, {position}};
        open->vertices.push_back(p);
      }
      position = p;
    } else if (const auto* sp = std::get_if<SelectPen>(&cmd)) {
      close();
      pen = sp->pen;
    } else if (std::holds_alternative<Home>(cmd)) {
      close();
      down = false;
      position = {};
    }
  }
  close();
  return out;
}

}  // namespace penplot::dmp
