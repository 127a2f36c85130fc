#pragma once

#include <vector>

#include "penplot/geometry.hpp"
#include "penplot/plot_core.hpp"
#include "penplot/surface3d.hpp"

namespace penplot {

struct ContourLevelSet {
  std::vector<double> levels;  // strictly ascending, finite
};

struct ContourPolyline {
  double level = 0.0;
  std::vector<Point2> vertices;  // user units; closed loops do not repeat the start
  bool closed = false;
};

// k levels evenly spaced strictly inside [min, max]; empty for a constant grid.
ContourLevelSet choose_levels(const ScalarGrid& grid, int k);

// Marching squares. Grid values equal to a level count as lying just above
// it (perturbed by 1e-12 of the value range). Saddle cells pair crossings by
// the cell-centre average: a centre at or above the level keeps the
// above-level corners connected.
//
// Levels are extracted in parallel; output is ordered by level, then by the
// row-major position of each polyline's first segment.
std::vector<ContourPolyline> extract_contours(const ScalarGrid& grid,
                                              const ContourLevelSet& levels);

namespace serial {
std::vector<ContourPolyline> extract_contours(const ScalarGrid& grid,
                                              const ContourLevelSet& levels);
}

void render_contours(const std::vector<ContourPolyline>& polylines,
                     PlotContext& ctx);

// As above, selecting pen (level index mod 8) + 1 whenever the level changes.
void render_contours(const std::vector<ContourPolyline>& polylines,
                     const ContourLevelSet& levels, PlotContext& ctx);

}  // namespace penplot
