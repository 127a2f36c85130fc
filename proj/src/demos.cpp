#include "penplot/demos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "penplot/error.hpp"

namespace penplot {

const std::vector<DemoInfo>& demo_catalog() {
  static const std::vector<DemoInfo> catalog{
      {"sinc", DemoKind::scalar},   {"saddle", DemoKind::scalar},
      {"ripple", DemoKind::scalar}, {"sphere", DemoKind::closed},
      {"torus", DemoKind::closed},
  };
  return catalog;
}

std::optional<DemoInfo> find_demo(std::string_view name) {
  for (const auto& d : demo_catalog()) {
    if (d.name == name) return d;
  }
  return std::nullopt;
}

namespace {

[[noreturn]] void unknown_demo(std::string_view name) {
  throw Error(Errc::validation, "unknown demo '" + std::string(name) + "'");
}

}  // namespace

ScalarFunction scalar_demo_function(std::string_view name) {
  if (name == "sinc") {
    return [](double x, double y) {
      const double r = 12.0 * std::hypot(x, y);
      return 0.6 * (r == 0.0 ? 1.0 : std::sin(r) / r);
    };
  }
  if (name == "saddle") {
    return [](double x, double y) { return 0.6 * (x * x - y * y); };
  }
  if (name == "ripple") {
    return [](double x, double y) {
      const double r = 10.0 * std::hypot(x, y);
      return 0.6 * std::cos(r) * std::exp(-r / 3.0);
    };
  }
  unknown_demo(name);
}

ScalarGrid sample_demo(std::string_view name, Resolution res) {
  return sample_scalar(scalar_demo_function(name), {-1.0, 1.0}, {-1.0, 1.0}, res);
}

ParametricGrid closed_demo(std::string_view name, Resolution res) {
  if (res.n < 2) throw Error(Errc::validation, "resolution must be >= 2");
  constexpr double pi = std::numbers::pi;
  ParametricGrid grid;
  grid.nu = res.n;
  grid.nv = res.n;
  grid.points.reserve(static_cast<std::size_t>(res.n) * res.n);
  if (name == "sphere") {
    grid.wrap_u = true;
    for (int j = 0; j < res.n; ++j) {
      const double lat = sample_position({-pi / 2, pi / 2}, j, res.n);
      for (int i = 0; i < res.n; ++i) {
        const double lon = 2 * pi * i / res.n;
        grid.points.push_back(
            {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)});
      }
    }
    // Collapse each pole row onto one exact point.
    for (int i = 0; i < res.n; ++i) {
      grid.points[i] = {0.0, 0.0, -1.0};
      grid.points[static_cast<std::size_t>(res.n - 1) * res.n + i] = {0.0, 0.0, 1.0};
    }
    return grid;
  }
  if (name == "torus") {
    constexpr double major = 2.0;
    constexpr double minor = 0.75;
    grid.wrap_u = true;
    grid.wrap_v = true;
    for (int j = 0; j < res.n; ++j) {
      const double v = 2 * pi * j / res.n;
      for (int i = 0; i < res.n; ++i) {
        const double u = 2 * pi * i / res.n;
        const double ring = major + minor * std::cos(v);
        grid.points.push_back({ring * std::cos(u), ring * std::sin(u), minor * std::sin(v)});
      }
    }
    return grid;
  }
  unknown_demo(name);
}

Window fit_window(Rect user, const PageSetup& page, double pad) {
  const Rect device = page.drawable();
  double w = user.width();
  double h = user.height();
  const double side = std::max({w, h, 1e-9});
  const Point2 centre = 0.5 * (user.min + user.max);
  w = std::max(w, 1e-9) + 2 * pad * side;
  h = std::max(h, 1e-9) + 2 * pad * side;
  // Grow the tighter axis so both axes share one scale.
  const double aspect = device.width() / device.height();
  if (w / h > aspect) {
    h = w / aspect;
  } else {
    w = h * aspect;
  }
  Window window;
  window.user_min = {centre.x - w / 2, centre.y - h / 2};
  window.user_max = {centre.x + w / 2, centre.y + h / 2};
  window.device_min = device.min;
  window.device_max = device.max;
  return window;
}

namespace {

Rect projected_bounds(const std::vector<Vec3>& points, const ViewTransform& view) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  Rect box{{inf, inf}, {-inf, -inf}};
  for (const auto& p : points) {
    const Point2 q = project(view, p).xy;
    box.min.x = std::min(box.min.x, q.x);
    box.min.y = std::min(box.min.y, q.y);
    box.max.x = std::max(box.max.x, q.x);
    box.max.y = std::max(box.max.y, q.y);
  }
  return box;
}

}  // namespace

DisplayList render_scalar_surface(const ScalarGrid& grid, const SurfaceOptions& options) {
  check_grid(grid);
  std::vector<Vec3> points;
  points.reserve(grid.z.size());
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) points.push_back({grid.x_at(i), grid.y_at(j), grid.at(i, j)});
  }
  const ViewTransform view{rotation_matrix(options.euler), options.projection};
  PlotContext ctx(fit_window(projected_bounds(points, view), options.page));
  RectRenderOptions render;
  render.width = options.horizon_width;
  render.style = options.style;
  render_rect_surface(grid, options.euler, options.projection, ctx, render);
  return ctx.finalize();
}

DisplayList render_closed_surface(const ParametricGrid& grid, const SurfaceOptions& options) {
  check_grid(grid);
  const ViewTransform view{rotation_matrix(options.euler), options.projection};
  PlotContext ctx(fit_window(projected_bounds(grid.points, view), options.page));
  render_closed_surface(grid, options.euler, options.projection, ctx);
  return ctx.finalize();
}

DisplayList render_contour_plot(const ScalarGrid& grid, const ContourLevelSet& levels,
                                const PageSetup& page) {
  check_grid(grid);
  const Rect domain{{grid.x_range.lo, grid.y_range.lo}, {grid.x_range.hi, grid.y_range.hi}};
  PlotContext ctx(fit_window(domain, page));
  render_contours(extract_contours(grid, levels), levels, ctx);
  return ctx.finalize();
}

}  // namespace penplot
