#pragma once

// Built-in demonstration surfaces and the page-fitting render helpers used by
// the CLI and the session service.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "penplot/backends.hpp"
#include "penplot/contour2d.hpp"
#include "penplot/surface3d.hpp"

namespace penplot {

enum class DemoKind { scalar, closed };

struct DemoInfo {
  std::string name;
  DemoKind kind;
};

// sinc, saddle, ripple (scalar); sphere, torus (closed).
const std::vector<DemoInfo>& demo_catalog();
std::optional<DemoInfo> find_demo(std::string_view name);

// Scalar demos are defined on [-1, 1]^2.
ScalarFunction scalar_demo_function(std::string_view name);
ScalarGrid sample_demo(std::string_view name, Resolution res);

// Sphere: u = longitude (wrapped), v = latitude from the south pole to the
// north pole. Torus (R = 2, r = 0.75): both directions wrapped.
ParametricGrid closed_demo(std::string_view name, Resolution res);

// Window mapping `user` onto the drawable page area with equal x/y scale,
// centred; `user` is padded by `pad` of its larger side first.
Window fit_window(Rect user, const PageSetup& page, double pad = 0.02);

struct SurfaceOptions {
  EulerAngles euler;
  Projection projection;
  MeshStyle style = MeshStyle::mesh;
  int horizon_width = 1024;
  PageSetup page;
};

DisplayList render_scalar_surface(const ScalarGrid& grid, const SurfaceOptions& options);
DisplayList render_closed_surface(const ParametricGrid& grid, const SurfaceOptions& options);

// Plan view of the grid domain with one pen per level (cycling 1..8).
DisplayList render_contour_plot(const ScalarGrid& grid, const ContourLevelSet& levels,
                                const PageSetup& page = {});

}  // namespace penplot
