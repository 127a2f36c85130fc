#pragma once

// Houston Instrument DM/PL (Hiplot DMP-29) reader and DM/PL -> HP-GL
// translator.
//
// Accepted grammar (whitespace, including newlines, separates commands and
// is otherwise ignored):
//
//   ;:          initialize
//   U           pen up
//   D           pen down
//   <int>,<int> absolute move in DMP units with the current pen state;
//               a move directly following another may be joined by ','
//               ("D10,10,20,20")
//   P<digit>    select pen 1..8
//   H           home
//
// Every other byte, including the relative-move and speed commands of the
// full language, is rejected.

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "penplot/backends.hpp"

namespace penplot::dmp {

struct Init {
  friend bool operator==(const Init&, const Init&) = default;
};
struct PenUp {
  friend bool operator==(const PenUp&, const PenUp&) = default;
};
struct PenDown {
  friend bool operator==(const PenDown&, const PenDown&) = default;
};
struct MoveAbs {
  long x = 0;
  long y = 0;
  friend bool operator==(const MoveAbs&, const MoveAbs&) = default;
};
struct SelectPen {
  int pen = 1;
  friend bool operator==(const SelectPen&, const SelectPen&) = default;
};
struct Home {
  friend bool operator==(const Home&, const Home&) = default;
};

using Command = std::variant<Init, PenUp, PenDown, MoveAbs, SelectPen, Home>;

struct Span {
  std::size_t offset = 0;
  std::size_t length = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Program {
  std::vector<Command> commands;
  std::vector<Span> spans;  // byte range of each command in the source
};

struct Resolution {
  double inch_per_unit = 0.005;

  double mm_per_unit() const { return inch_per_unit * 25.4; }
};

Program parse(std::string_view source);

// Throws page_overflow, positioned at the offending command's byte offset,
// when a translated coordinate leaves [0, 32767] or the page.
HpglDocument translate(const Program& program, const PageSetup& page = {},
                       Resolution resolution = {});

// Down-pen polylines in millimeters, pen ids attached.
Trajectory trajectory(const Program& program, Resolution resolution = {});

}  // namespace penplot::dmp
