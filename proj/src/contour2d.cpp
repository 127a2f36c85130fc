#include "penplot/contour2d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "penplot/error.hpp"

namespace penplot {

ContourLevelSet choose_levels(const ScalarGrid& grid, int k) {
  check_grid(grid);
  if (k < 1) throw Error(Errc::validation, "level count must be >= 1");
  const auto [lo, hi] = std::minmax_element(grid.z.begin(), grid.z.end());
  ContourLevelSet set;
  if (*lo == *hi) return set;
  for (int i = 1; i <= k; ++i) {
    set.levels.push_back(*lo + (static_cast<double>(i) / (k + 1)) * (*hi - *lo));
  }
  return set;
}

namespace {

void check_levels(const ContourLevelSet& set) {
  for (std::size_t i = 0; i < set.levels.size(); ++i) {
    if (!std::isfinite(set.levels[i])) {
      throw Error(Errc::validation, "contour levels must be finite");
    }
    if (i > 0 && !(set.levels[i] > set.levels[i - 1])) {
      throw Error(Errc::validation, "contour levels must be strictly ascending");
    }
  }
}

enum Side { kBottom = 0, kRight = 1, kTop = 2, kLeft = 3 };

struct Segment {
  int edge_a;
  int edge_b;
};

// Crossings live on grid edges. Horizontal edge (i,j) joins (i,j)-(i+1,j);
// vertical edge (i,j) joins (i,j)-(i,j+1). Each is interpolated once in its
// canonical direction, so neighbouring cells share bit-identical endpoints.
class LevelExtractor {
 public:
  LevelExtractor(const ScalarGrid& grid, double level, double epsilon)
      : grid_(grid), level_(level), epsilon_(epsilon),
        horizontal_count_((grid.nx - 1) * grid.ny) {}

  std::vector<ContourPolyline> run() {
    collect_segments();
    return chain();
  }

 private:
  double value(int i, int j) const {
    const double v = grid_.at(i, j);
    return v == level_ ? level_ + epsilon_ : v;
  }
  bool above(int i, int j) const { return value(i, j) > level_ || grid_.at(i, j) == level_; }

  int horizontal(int i, int j) const { return j * (grid_.nx - 1) + i; }
  int vertical(int i, int j) const { return horizontal_count_ + j * grid_.nx + i; }

  int cell_edge(int i, int j, Side side) const {
    switch (side) {
      case kBottom: return horizontal(i, j);
      case kRight: return vertical(i + 1, j);
      case kTop: return horizontal(i, j + 1);
      case kLeft: return vertical(i, j);
    }
    return -1;
  }

  Point2 crossing(int edge) const {
    if (edge < horizontal_count_) {
      const int i = edge % (grid_.nx - 1);
      const int j = edge / (grid_.nx - 1);
      const double za = value(i, j);
      const double zb = value(i + 1, j);
      const double t = (level_ - za) / (zb - za);
      const double x0 = grid_.x_at(i);
      const double x1 = grid_.x_at(i + 1);
      return {x0 + t * (x1 - x0), grid_.y_at(j)};
    }
    const int e = edge - horizontal_count_;
    const int i = e % grid_.nx;
    const int j = e / grid_.nx;
    const double za = value(i, j);
    const double zb = value(i, j + 1);
    const double t = (level_ - za) / (zb - za);
    const double y0 = grid_.y_at(j);
    const double y1 = grid_.y_at(j + 1);
    return {grid_.x_at(i), y0 + t * (y1 - y0)};
  }

  void add(int i, int j, Side a, Side b) {
    segments_.push_back({cell_edge(i, j, a), cell_edge(i, j, b)});
  }

  void collect_segments() {
    for (int j = 0; j + 1 < grid_.ny; ++j) {
      for (int i = 0; i + 1 < grid_.nx; ++i) {
        const int index = (above(i, j) ? 1 : 0) | (above(i + 1, j) ? 2 : 0) |
                          (above(i + 1, j + 1) ? 4 : 0) | (above(i, j + 1) ? 8 : 0);
        switch (index) {
          case 0:
          case 15:
            break;
          case 1: add(i, j, kLeft, kBottom); break;
          case 2: add(i, j, kBottom, kRight); break;
          case 3: add(i, j, kLeft, kRight); break;
          case 4: add(i, j, kRight, kTop); break;
          case 6: add(i, j, kBottom, kTop); break;
          case 7: add(i, j, kLeft, kTop); break;
          case 8: add(i, j, kTop, kLeft); break;
          case 9: add(i, j, kBottom, kTop); break;
          case 11: add(i, j, kRight, kTop); break;
          case 12: add(i, j, kLeft, kRight); break;
          case 13: add(i, j, kBottom, kRight); break;
          case 14: add(i, j, kLeft, kBottom); break;
          case 5:
          case 10: {
            const double centre = 0.25 * (value(i, j) + value(i + 1, j) +
                                          value(i + 1, j + 1) + value(i, j + 1));
            // Which diagonal pair stays connected through the centre.
            const bool centre_above = centre >= level_;
            const bool isolate_odd = (index == 5) == centre_above;
            if (isolate_odd) {
              // Cut off corners 1 and 3.
              add(i, j, kBottom, kRight);
              add(i, j, kTop, kLeft);
            } else {
              // Cut off corners 0 and 2.
              add(i, j, kLeft, kBottom);
              add(i, j, kRight, kTop);
            }
            break;
          }
        }
      }
    }
  }

  std::vector<ContourPolyline> chain() {
    const int edge_count = horizontal_count_ + grid_.nx * (grid_.ny - 1);
    // Each crossing is shared by at most the two cells adjacent to its edge.
    std::vector<std::array<int, 2>> at_edge(edge_count, {-1, -1});
    for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
      for (int e : {segments_[s].edge_a, segments_[s].edge_b}) {
        auto& slot = at_edge[e];
        (slot[0] < 0 ? slot[0] : slot[1]) = s;
      }
    }
    auto degree = [&](int e) { return (at_edge[e][0] >= 0) + (at_edge[e][1] >= 0); };

    std::vector<char> used(segments_.size(), 0);
    std::vector<ContourPolyline> out;

    auto walk = [&](int start_segment, int start_edge) {
      ContourPolyline line;
      line.level = level_;
      std::vector<int> edges{start_edge};
      int seg = start_segment;
      int edge = start_edge;
      while (seg >= 0 && !used[seg]) {
        used[seg] = 1;
        edge = segments_[seg].edge_a == edge ? segments_[seg].edge_b : segments_[seg].edge_a;
        if (edge == start_edge) {
          line.closed = true;
          break;
        }
        edges.push_back(edge);
        const auto& slot = at_edge[edge];
        seg = slot[0] == seg ? slot[1] : slot[0];
      }
      for (int e : edges) {
        const Point2 p = crossing(e);
        if (line.vertices.empty() || line.vertices.back() != p) line.vertices.push_back(p);
      }
      if (line.closed && line.vertices.size() > 1 && line.vertices.back() == line.vertices.front()) {
        line.vertices.pop_back();
      }
      if (line.vertices.size() >= 2) out.push_back(std::move(line));
    };

    for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
      if (used[s]) continue;
      if (degree(segments_[s].edge_a) == 1) {
        walk(s, segments_[s].edge_a);
      } else if (degree(segments_[s].edge_b) == 1) {
        walk(s, segments_[s].edge_b);
      }
    }
    for (int s = 0; s < static_cast<int>(segments_.size()); ++s) {
      if (!used[s]) walk(s, segments_[s].edge_a);
    }
    return out;
  }

  const ScalarGrid& grid_;
  double level_;
  double epsilon_;
  int horizontal_count_;
  std::vector<Segment> segments_;
};

double perturbation(const ScalarGrid& grid) {
  const auto [lo, hi] = std::minmax_element(grid.z.begin(), grid.z.end());
  return 1e-12 * (*hi - *lo);
}

}  // namespace

namespace serial {

std::vector<ContourPolyline> extract_contours(const ScalarGrid& grid,
                                              const ContourLevelSet& levels) {
  check_grid(grid);
  check_levels(levels);
  const double eps = perturbation(grid);
  std::vector<ContourPolyline> out;
  for (double level : levels.levels) {
    auto lines = LevelExtractor(grid, level, eps).run();
    out.insert(out.end(), std::make_move_iterator(lines.begin()),
               std::make_move_iterator(lines.end()));
  }
  return out;
}

}  // namespace serial

std::vector<ContourPolyline> extract_contours(const ScalarGrid& grid,
                                              const ContourLevelSet& levels) {
  check_grid(grid);
  check_levels(levels);
  const double eps = perturbation(grid);
  const int count = static_cast<int>(levels.levels.size());
  std::vector<std::vector<ContourPolyline>> per_level(count);

#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < count; ++k) {
    per_level[k] = LevelExtractor(grid, levels.levels[k], eps).run();
  }

  std::vector<ContourPolyline> out;
  for (auto& lines : per_level) {
    out.insert(out.end(), std::make_move_iterator(lines.begin()),
               std::make_move_iterator(lines.end()));
  }
  return out;
}

namespace {

void emit_polyline(const ContourPolyline& line, PlotContext& ctx) {
  ctx.move(line.vertices.front().x, line.vertices.front().y);
  for (std::size_t i = 1; i < line.vertices.size(); ++i) {
    ctx.draw(line.vertices[i].x, line.vertices[i].y);
  }
  if (line.closed) ctx.draw(line.vertices.front().x, line.vertices.front().y);
}

}  // namespace

void render_contours(const std::vector<ContourPolyline>& polylines, PlotContext& ctx) {
  if (ctx.sealed()) throw Error(Errc::sealed_context, "plot context is sealed");
  for (const auto& line : polylines) {
    if (!line.vertices.empty()) emit_polyline(line, ctx);
  }
}

void render_contours(const std::vector<ContourPolyline>& polylines,
                     const ContourLevelSet& levels, PlotContext& ctx) {
  if (ctx.sealed()) throw Error(Errc::sealed_context, "plot context is sealed");
  int current_pen = -1;
  for (const auto& line : polylines) {
    if (line.vertices.empty()) continue;
    const auto it = std::find(levels.levels.begin(), levels.levels.end(), line.level);
    const int index = it == levels.levels.end()
                          ? 0
                          : static_cast<int>(it - levels.levels.begin());
    const int pen = index % 8 + 1;
    if (pen != current_pen) {
      ctx.select_pen(pen);
      current_pen = pen;
    }
    emit_polyline(line, ctx);
  }
}

}  // namespace penplot
