#pragma once

#include <functional>
#include <string>
#include <vector>

#include "penplot/demos.hpp"

// Fixed drawings whose HP-GL and SVG bytes are committed under tests/golden.
struct GoldenCase {
  std::string name;
  std::function<penplot::DisplayList()> render;
};

inline std::vector<GoldenCase> golden_cases() {
  using namespace penplot;
  return {
      {"sinc",
       [] {
         SurfaceOptions o;
         o.euler = default_view().euler;
         return render_scalar_surface(sample_demo("sinc", {32}), o);
       }},
      {"sphere",
       [] {
         SurfaceOptions o;
         o.euler = default_view().euler;
         return render_closed_surface(closed_demo("sphere", {16}), o);
       }},
      {"contour3",
       [] {
         const ScalarGrid g = sample_demo("ripple", {32});
         return render_contour_plot(g, choose_levels(g, 3));
       }},
  };
}
