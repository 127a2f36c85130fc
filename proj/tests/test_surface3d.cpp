#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "penplot/demos.hpp"
#include "penplot/error.hpp"
#include "penplot/surface3d.hpp"

using namespace penplot;

namespace {

constexpr double pi = std::numbers::pi;

const Window kWide{{-10, -10}, {10, 10}, {0, 0}, {200, 200}};

double max_abs_diff(const Mat3& a, const oracle::M3& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a(i, j) - b[i][j]));
  return d;
}

ScalarGrid grid_from(int nx, int ny, Interval xr, Interval yr, std::vector<double> z) {
  return {nx, ny, xr, yr, std::move(z)};
}

int count_lines(const DisplayList& dl) {
  int n = 0;
  for (const auto& c : dl.commands) n += std::holds_alternative<LineTo>(c) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("sample_scalar examples") {
  const ScalarGrid g = sample_scalar([](double x, double) { return x; }, {0, 1}, {0, 1}, {2});
  CHECK(g.z == std::vector<double>{0, 1, 0, 1});
  const ScalarGrid zero = sample_scalar([](double, double) { return 0.0; }, {0, 1}, {0, 1}, {3});
  CHECK(zero.z == std::vector<double>(9, 0.0));

  auto pole = [](double x, double) { return 1.0 / (x - 0.5); };
  CHECK_NOTHROW(sample_scalar(pole, {0, 1}, {0, 1}, {2}));
  try {
    sample_scalar(pole, {0, 1}, {0, 1}, {3});
    FAIL("expected non-finite sample");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::non_finite_sample);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("sample positions include both endpoints exactly") {
  CHECK(sample_position({-1, 1}, 0, 7) == -1.0);
  CHECK(sample_position({-1, 1}, 6, 7) == 1.0);
  CHECK(sample_position({0, 0.3}, 9, 10) == 0.3);
}

TEST_CASE("check_grid rejects broken grids") {
  CHECK_THROWS_AS(check_grid(grid_from(1, 2, {0, 1}, {0, 1}, {0, 0})), Error);
  CHECK_THROWS_AS(check_grid(grid_from(2, 2, {0, 1}, {0, 1}, {0, 0, 0})), Error);
  CHECK_THROWS_AS(check_grid(grid_from(2, 2, {1, 1}, {0, 1}, {0, 0, 0, 0})), Error);
  CHECK_THROWS_AS(check_grid(grid_from(2, 2, {0, 1}, {0, 1}, {0, 0, NAN, 0})), Error);
}

TEST_CASE("rotation_matrix examples") {
  const Mat3 id = rotation_matrix({0, 0, 0});
  CHECK(max_abs_diff(id, oracle::euler(0, 0, 0)) == 0.0);
  const Vec3 v = rotation_matrix({pi / 2, 0, 0}) * Vec3{1, 0, 0};
  CHECK(std::abs(v.x) < 1e-15);
  CHECK(std::abs(v.y - 1) < 1e-15);
  CHECK(std::abs(v.z) < 1e-15);
  CHECK(max_abs_diff(rotation_matrix({0.3, 0.5, 0.7}), oracle::euler(0.3, 0.5, 0.7)) < 1e-15);
}

TEST_CASE("rotation_matrix is orthonormal with unit determinant") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> a(-10, 10);
  for (int k = 0; k < 200; ++k) {
    const Mat3 r = rotation_matrix({a(rng), a(rng), a(rng)});
    const Mat3 rtr = transpose(r) * r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) CHECK(std::abs(rtr(i, j) - (i == j ? 1 : 0)) < 1e-12);
    CHECK(std::abs(determinant(r) - 1) < 1e-12);
  }
}

TEST_CASE("project examples") {
  const ViewTransform ortho{Mat3::identity(), Projection::orthographic()};
  const Projected p = project(ortho, {1, 2, 3});
  CHECK(p.xy == Point2{1, 2});
  CHECK(p.depth == 3);
  const ViewTransform persp{Mat3::identity(), Projection::perspective(10)};
  CHECK(project(persp, {1, 0, 0}).xy == Point2{1, 0});
  CHECK(project(persp, {1, 0, 5}).xy == Point2{2, 0});
  try {
    project(persp, {0, 0, 10});
    FAIL("expected behind-eye error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::behind_eye);
  }
  CHECK_THROWS_AS(Projection::perspective(0), Error);
}

TEST_CASE("default view") {
  const View v = default_view();
  CHECK(v.euler == EulerAngles{-pi / 4, -pi / 3, 0});
  CHECK(v.projection.kind == Projection::Kind::orthographic);
  CHECK(std::abs(determinant(rotation_matrix(v.euler)) - 1) < 1e-12);
  SurfaceOptions options;
  options.euler = v.euler;
  CHECK_FALSE(render_scalar_surface(sample_demo("sinc", {32}), options).commands.empty());
}

TEST_CASE("horizon buffer basics") {
  HorizonBuffer h(8);
  CHECK(h.visible(3.5, 0.0));
  h.update({0, 1}, {7, 1});
  CHECK(h.upper_at(2.5) == 1.0);
  CHECK(h.lower_at(2.5) == 1.0);
  CHECK(h.visible(2.5, 1.5));
  CHECK(h.visible(2.5, 0.5));
  CHECK_FALSE(h.visible(2.5, 1.0));  // strict comparison
  h.update({0, 0}, {7, 2});
  CHECK_FALSE(h.visible(3.5, 1.05));
  // A segment crossing the horizon is split at the crossing.
  const auto spans = h.visible_spans({0, 3}, {7, -3});
  REQUIRE(spans.size() == 2);
  CHECK(spans.front().first == 0.0);
  CHECK(spans.back().second == 1.0);
}

TEST_CASE("flat 2x2 grid seen from above shows both rows") {
  const ScalarGrid g = grid_from(2, 2, {0, 1}, {0, 1}, {0, 0, 0, 0});
  PlotContext ctx(kWide);
  RectRenderOptions opt;
  opt.style = MeshStyle::rows;
  const auto result = render_rect_surface(g, {0, 0, 0}, Projection::orthographic(), ctx, opt);
  CHECK(result.vertex_visible == std::vector<std::uint8_t>{1, 1, 1, 1});
  CHECK(count_lines(ctx.finalize()) == 2);
}

TEST_CASE("a tall nearer row hides the row behind it") {
  // Viewed at theta = -60 degrees: larger y is farther away. The middle row
  // is a wall tall enough that the far row projects inside its shadow.
  const EulerAngles view{0, -pi / 3, 0};
  const ScalarGrid g = grid_from(4, 3, {0, 1}, {0, 1},
                                 {0, 0, 0, 0, 2, 2, 2, 2, 0, 0, 0, 0});
  PlotContext ctx(kWide);
  RectRenderOptions opt;
  opt.style = MeshStyle::rows;
  const auto result = render_rect_surface(g, view, Projection::orthographic(), ctx, opt);
  CHECK(result.swept_rows);
  CHECK(result.order == std::vector<int>{0, 1, 2});
  const oracle::SurfaceZBuffer zb(g, oracle::euler(view.phi, view.theta, view.psi));
  for (int i = 0; i < 4; ++i) {
    CHECK(result.vertex_visible[8 + i] == 0);
    CHECK(zb.hidden(8 + i));
  }
  // Only the near and wall rows are drawn.
  CHECK(count_lines(ctx.finalize()) == 6);
}

TEST_CASE("with only two rows the lower far row stays on the silhouette") {
  // Near row raised above the far row on screen: the far row is seen from
  // below the patch and nothing covers it.
  const EulerAngles view{0, -pi / 3, 0};
  const ScalarGrid g = grid_from(4, 2, {0, 1}, {0, 1}, {2, 2, 2, 2, 0, 0, 0, 0});
  PlotContext ctx(kWide);
  const auto result = render_rect_surface(g, view, Projection::orthographic(), ctx);
  const oracle::SurfaceZBuffer zb(g, oracle::euler(view.phi, view.theta, view.psi));
  for (int i = 0; i < 4; ++i) {
    CHECK(result.vertex_visible[4 + i] == 1);
    CHECK_FALSE(zb.hidden(4 + i));
  }
}

TEST_CASE("upper horizon never drops across passes") {
  const ScalarGrid g = sample_scalar([](double x, double) { return -std::abs(x); }, {-1, 1}, {-1, 1}, {3});
  std::vector<std::vector<double>> passes;
  RectRenderOptions opt;
  opt.width = 64;
  opt.on_pass = [&](const HorizonBuffer& h) { passes.push_back(h.upper()); };
  PlotContext ctx(kWide);
  render_rect_surface(g, default_view().euler, Projection::orthographic(), ctx, opt);
  REQUIRE(passes.size() == 3);
  for (std::size_t k = 1; k < passes.size(); ++k) {
    for (std::size_t c = 0; c < passes[k].size(); ++c) CHECK(passes[k][c] >= passes[k - 1][c]);
  }
}

TEST_CASE("nearest line is emitted in full") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> z(-1, 1), ang(-pi, pi);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(36);
    for (auto& v : values) v = z(rng);
    const ScalarGrid g = grid_from(6, 6, {-2, 2}, {-2, 2}, values);
    PlotContext ctx(kWide);
    const auto r = render_rect_surface(g, {ang(rng), ang(rng), ang(rng)}, Projection::orthographic(), ctx);
    const int near = r.order.front();
    for (int m = 0; m < 6; ++m) {
      const int v = r.swept_rows ? near * 6 + m : m * 6 + near;
      CHECK(r.vertex_visible[v] == 1);
    }
  }
}

// Steep random grids make vertices that only the strip between their own line
// and the previous one can hide.
TEST_CASE("vertex visibility agrees with the triangle z-buffer") {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> z(-2, 2), ang(-pi, pi);
  int hidden = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> values(36);
    for (auto& v : values) v = z(rng);
    const ScalarGrid g = grid_from(6, 6, {-2, 2}, {-2, 2}, values);
    const EulerAngles e{ang(rng), ang(rng), ang(rng)};
    PlotContext ctx(kWide);
    const auto r = render_rect_surface(g, e, Projection::orthographic(), ctx);
    const oracle::SurfaceZBuffer zb(g, oracle::euler(e.phi, e.theta, e.psi));
    for (int v = 0; v < 36; ++v) {
      hidden += zb.hidden(v) ? 1 : 0;
      if (zb.deeply_hidden(v, 0.02)) CHECK(r.vertex_visible[v] == 0);
      if (!zb.near_transition(v, 0.02)) CHECK(r.vertex_visible[v] == 1);
    }
  }
  CHECK(hidden > 100);
}

TEST_CASE("surface rendering is deterministic") {
  SurfaceOptions options;
  options.euler = {0.4, -1.1, 0.2};
  const ScalarGrid g = sample_demo("ripple", {24});
  CHECK(render_scalar_surface(g, options) == render_scalar_surface(g, options));
  options.projection = Projection::perspective(6);
  const DisplayList a = render_scalar_surface(g, options);
  CHECK_FALSE(a.commands.empty());
  CHECK(a == render_scalar_surface(g, options));
  CHECK_FALSE(validate(a));
}

TEST_CASE("sphere culling matches facet normals") {
  const ParametricGrid sphere = closed_demo("sphere", {8});
  PlotContext ctx(kWide);
  const auto r = render_closed_surface(sphere, {0, 0, 0}, Projection::orthographic(), ctx);
  int fu = 0, fv = 0;
  const auto expected = oracle::facing_facets(sphere, oracle::euler(0, 0, 0), fu, fv);
  CHECK(r.facets_u == fu);
  CHECK(r.facets_v == fv);
  CHECK(r.facet_drawn == expected);
  int count = 0;
  for (auto f : expected) count += f;
  CHECK(count > 0);
}

TEST_CASE("a full turn of psi leaves the drawing unchanged") {
  const ParametricGrid sphere = closed_demo("sphere", {8});
  PlotContext a(kWide), b(kWide);
  render_closed_surface(sphere, {0, 0, 0}, Projection::orthographic(), a);
  render_closed_surface(sphere, {0, 0, 2 * pi}, Projection::orthographic(), b);
  const auto la = a.finalize().commands;
  const auto lb = b.finalize().commands;
  REQUIRE(la.size() == lb.size());
  for (std::size_t k = 0; k < la.size(); ++k) {
    REQUIRE(la[k].index() == lb[k].index());
    if (auto p = command_point(la[k])) {
      const Point2 q = *command_point(lb[k]);
      CHECK(std::abs(p->x - q.x) < 1e-9);
      CHECK(std::abs(p->y - q.y) < 1e-9);
    }
  }
}

TEST_CASE("single facing sheet draws each edge once") {
  ParametricGrid sheet{2, 2, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}, false, false};
  PlotContext ctx(kWide);
  const auto r = render_closed_surface(sheet, {0, 0, 0}, Projection::orthographic(), ctx);
  CHECK(r.edges_drawn == 4);
  CHECK(count_lines(ctx.finalize()) == 4);
  // Turned away from the viewer nothing is drawn.
  PlotContext back(kWide);
  CHECK(render_closed_surface(sheet, {0, pi, 0}, Projection::orthographic(), back).edges_drawn == 0);
}

TEST_CASE("torus closes in both directions") {
  const ParametricGrid torus = closed_demo("torus", {12});
  CHECK(torus.wrap_u);
  CHECK(torus.wrap_v);
  SurfaceOptions options;
  options.euler = default_view().euler;
  const DisplayList dl = render_closed_surface(torus, options);
  CHECK_FALSE(dl.commands.empty());
  CHECK_FALSE(validate(dl));
}

TEST_CASE("perspective eye inside the surface is an error") {
  SurfaceOptions options;
  options.projection = Projection::perspective(0.5);
  CHECK_THROWS_AS(render_closed_surface(closed_demo("sphere", {8}), options), Error);
}
