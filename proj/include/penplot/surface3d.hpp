#pragma once

// 3D surface rendering: sampling z = f(x, y) onto grids, Euler-angle view
// transforms, floating-horizon hidden-line removal for rectangular-domain
// graphs and back-face culling for closed parametric surfaces.

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "penplot/geometry.hpp"
#include "penplot/plot_core.hpp"

namespace penplot {

// Z-X-Z convention, stored unreduced.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;

  friend bool operator==(const EulerAngles&, const EulerAngles&) = default;
};

struct Resolution {
  int n = 32;  // samples per axis, n >= 2
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  double operator()(int r, int c) const { return m[r * 3 + c]; }
  double& operator()(int r, int c) { return m[r * 3 + c]; }
  static Mat3 identity() { return {}; }
};

Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, Vec3 v);
Mat3 transpose(const Mat3& a);
double determinant(const Mat3& a);

struct Projection {
  enum class Kind { orthographic, perspective };
  Kind kind = Kind::orthographic;
  double distance = 0.0;  // eye distance along +z, perspective only

  static Projection orthographic() { return {}; }
  static Projection perspective(double distance);

  friend bool operator==(const Projection&, const Projection&) = default;
};

struct ViewTransform {
  Mat3 rotation;
  Projection projection;
};

struct Projected {
  Point2 xy;
  double depth = 0.0;  // rotated z; larger is nearer the viewer
};

enum class MeshStyle { rows, mesh };

struct ScalarGrid {
  int nx = 0;
  int ny = 0;
  Interval x_range;
  Interval y_range;
  std::vector<double> z;  // z[j * nx + i]

  double x_at(int i) const;
  double y_at(int j) const;
  double at(int i, int j) const { return z[static_cast<std::size_t>(j) * nx + i]; }
};

struct ParametricGrid {
  int nu = 0;
  int nv = 0;
  std::vector<Vec3> points;  // points[j * nu + i]
  bool wrap_u = false;
  bool wrap_v = false;

  const Vec3& at(int i, int j) const {
    return points[static_cast<std::size_t>(j) * nu + i];
  }
};

// Throws invalid_grid when a grid breaks its invariants.
void check_grid(const ScalarGrid& grid);
void check_grid(const ParametricGrid& grid);

// i-th of n equally spaced samples over range, both endpoints included.
double sample_position(Interval range, int i, int n);

using ScalarFunction = std::function<double(double, double)>;

// Samples rows in parallel; f must be safe to call concurrently and must
// not throw. A non-finite sample reports the first offending (x, y) in
// row-major order.
ScalarGrid sample_scalar(const ScalarFunction& f, Interval x_range,
                         Interval y_range, Resolution res);

namespace serial {
ScalarGrid sample_scalar(const ScalarFunction& f, Interval x_range,
                         Interval y_range, Resolution res);
}

Mat3 rotation_matrix(const EulerAngles& e);

Projected project(const ViewTransform& view, Vec3 p);

// Per-column upper/lower extents of everything drawn so far, in the
// horizon's own x scale (column units, 0..width-1).
class HorizonBuffer {
 public:
  explicit HorizonBuffer(int width);

  int width() const { return static_cast<int>(upper_.size()); }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& lower() const { return lower_; }

  // Horizon values at a fractional column, interpolating the two
  // neighbouring columns; an empty column takes its neighbour's value.
  double upper_at(double column) const;
  double lower_at(double column) const;

  // True when (column, y) lies strictly above upper or strictly below lower.
  bool visible(double column, double y) const;

  // Visible parameter intervals [t0, t1] of the segment a -> b, where each
  // point is (column, y).
  std::vector<std::pair<double, double>> visible_spans(Point2 a, Point2 b) const;

  void update(Point2 a, Point2 b);

 private:
  int piece_of(double column) const;
  void raise(int column, double y);

  std::vector<double> upper_;
  std::vector<double> lower_;
};

struct RectRenderOptions {
  int width = 1024;
  MeshStyle style = MeshStyle::mesh;
  // Called after each line pass with the updated horizon.
  std::function<void(const HorizonBuffer&)> on_pass;
};

struct RectRenderResult {
  std::vector<std::uint8_t> vertex_visible;  // [j * nx + i]
  bool swept_rows = true;  // false when lines of constant x were swept
  std::vector<int> order;  // swept line indices, nearest first
};

RectRenderResult render_rect_surface(const ScalarGrid& grid,
                                     const EulerAngles& e,
                                     const Projection& projection,
                                     PlotContext& ctx,
                                     const RectRenderOptions& options = {});

struct ClosedRenderResult {
  // Facet (i, j) at [j * facets_u + i].
  std::vector<std::uint8_t> facet_drawn;
  int facets_u = 0;
  int facets_v = 0;
  int edges_drawn = 0;
};

ClosedRenderResult render_closed_surface(const ParametricGrid& grid,
                                         const EulerAngles& e,
                                         const Projection& projection,
                                         PlotContext& ctx);

struct View {
  EulerAngles euler;
  Projection projection;
};

View default_view();

}  // namespace penplot
