#include "penplot/surface3d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>

#include "penplot/error.hpp"

namespace penplot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Mat3 rot_z(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {{c, -s, 0, s, c, 0, 0, 0, 1}};
}

Mat3 rot_x(double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {{1, 0, 0, 0, c, -s, 0, s, c}};
}

bool finite(Vec3 v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    }
  }
  return r;
}

Vec3 operator*(const Mat3& a, Vec3 v) {
  return {a(0, 0) * v.x + a(0, 1) * v.y + a(0, 2) * v.z,
          a(1, 0) * v.x + a(1, 1) * v.y + a(1, 2) * v.z,
          a(2, 0) * v.x + a(2, 1) * v.y + a(2, 2) * v.z};
}

Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  }
  return r;
}

double determinant(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

Projection Projection::perspective(double distance) {
  if (!std::isfinite(distance) || distance <= 0.0) {
    throw Error(Errc::validation, "perspective distance must be positive");
  }
  return {Kind::perspective, distance};
}

double ScalarGrid::x_at(int i) const { return sample_position(x_range, i, nx); }
double ScalarGrid::y_at(int j) const { return sample_position(y_range, j, ny); }

double sample_position(Interval range, int i, int n) {
  if (i == n - 1) return range.hi;
  return range.lo + (range.hi - range.lo) * i / (n - 1);
}

void check_grid(const ScalarGrid& grid) {
  if (grid.nx < 2 || grid.ny < 2) {
    throw Error(Errc::invalid_grid, "scalar grid needs at least 2x2 samples");
  }
  if (grid.z.size() != static_cast<std::size_t>(grid.nx) * grid.ny) {
    throw Error(Errc::invalid_grid, "scalar grid size mismatch");
  }
  if (!(grid.x_range.hi > grid.x_range.lo) || !(grid.y_range.hi > grid.y_range.lo)) {
    throw Error(Errc::invalid_grid, "scalar grid ranges are degenerate");
  }
  for (double v : grid.z) {
    if (!std::isfinite(v)) throw Error(Errc::invalid_grid, "non-finite grid value");
  }
}

void check_grid(const ParametricGrid& grid) {
  if (grid.nu < 2 || grid.nv < 2) {
    throw Error(Errc::invalid_grid, "parametric grid needs at least 2x2 samples");
  }
  if (grid.points.size() != static_cast<std::size_t>(grid.nu) * grid.nv) {
    throw Error(Errc::invalid_grid, "parametric grid size mismatch");
  }
  for (const auto& p : grid.points) {
    if (!finite(p)) throw Error(Errc::invalid_grid, "non-finite grid point");
  }
}

Mat3 rotation_matrix(const EulerAngles& e) {
  return rot_z(e.phi) * rot_x(e.theta) * rot_z(e.psi);
}

Projected project(const ViewTransform& view, Vec3 p) {
  const Vec3 q = view.rotation * p;
  if (view.projection.kind == Projection::Kind::orthographic) {
    return {{q.x, q.y}, q.z};
  }
  const double d = view.projection.distance;
  if (q.z >= d) {
    throw Error(Errc::behind_eye, "point lies at or behind the eye");
  }
  const double scale = d / (d - q.z);
  return {{q.x * scale, q.y * scale}, q.z};
}

View default_view() {
  return {{-std::numbers::pi / 4, -std::numbers::pi / 3, 0.0},
          Projection::orthographic()};
}

// --- floating horizon ---------------------------------------------------

HorizonBuffer::HorizonBuffer(int width) {
  if (width < 2) throw Error(Errc::validation, "horizon width must be >= 2");
  upper_.assign(width, -kInf);
  lower_.assign(width, kInf);
}

int HorizonBuffer::piece_of(double column) const {
  const int k = static_cast<int>(std::floor(column));
  return std::clamp(k, 0, width() - 2);
}

namespace {

double blend(double a, double b, double f) {
  if (std::isinf(a) && std::isinf(b)) return a;
  if (std::isinf(a)) return b;
  if (std::isinf(b)) return a;
  return a + f * (b - a);
}

// Sub-interval of [t0, t1] where the linear function through (t0, f0) and
// (t1, f1) is strictly positive.
std::optional<std::pair<double, double>> positive_part(double t0, double t1,
                                                       double f0, double f1) {
  if (std::isinf(f0) || std::isinf(f1)) {
    if (f0 > 0 && f1 > 0) return std::make_pair(t0, t1);
    return std::nullopt;
  }
  if (f0 > 0 && f1 > 0) return std::make_pair(t0, t1);
  if (f0 <= 0 && f1 <= 0) return std::nullopt;
  const double tc = t0 + (t1 - t0) * f0 / (f0 - f1);
  if (f0 > 0) return std::make_pair(t0, tc);
  return std::make_pair(tc, t1);
}

}  // namespace

double HorizonBuffer::upper_at(double column) const {
  const int k = piece_of(column);
  return blend(upper_[k], upper_[k + 1], column - k);
}

double HorizonBuffer::lower_at(double column) const {
  const int k = piece_of(column);
  return blend(lower_[k], lower_[k + 1], column - k);
}

bool HorizonBuffer::visible(double column, double y) const {
  return y > upper_at(column) || y < lower_at(column);
}

std::vector<std::pair<double, double>> HorizonBuffer::visible_spans(
    Point2 a, Point2 b) const {
  // Horizons are linear between integer columns, so split the segment there
  // and solve each piece exactly.
  std::vector<double> ts{0.0};
  if (a.x != b.x) {
    const double lo = std::min(a.x, b.x);
    const double hi = std::max(a.x, b.x);
    for (double c = std::floor(lo) + 1.0; c < hi; c += 1.0) {
      ts.push_back((c - a.x) / (b.x - a.x));
    }
    if (b.x < a.x) std::sort(ts.begin() + 1, ts.end());
  }
  ts.push_back(1.0);

  auto point_at = [&](double t) -> Point2 {
    if (t == 0.0) return a;
    if (t == 1.0) return b;
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
  };

  std::vector<std::pair<double, double>> spans;
  auto add = [&](std::pair<double, double> s) {
    if (!(s.second > s.first)) return;
    if (!spans.empty() && spans.back().second >= s.first) {
      spans.back().second = std::max(spans.back().second, s.second);
    } else {
      spans.push_back(s);
    }
  };

  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double t0 = ts[i];
    const double t1 = ts[i + 1];
    if (!(t1 > t0)) continue;
    const Point2 p0 = point_at(t0);
    const Point2 p1 = point_at(t1);
    const int k = piece_of(0.5 * (p0.x + p1.x));
    auto up = [&](double col) { return blend(upper_[k], upper_[k + 1], col - k); };
    auto lo = [&](double col) { return blend(lower_[k], lower_[k + 1], col - k); };
    const double u0 = p0.y - up(p0.x);
    const double u1 = p1.y - up(p1.x);
    const double l0 = lo(p0.x) - p0.y;
    const double l1 = lo(p1.x) - p1.y;
    auto above = positive_part(t0, t1, u0, u1);
    auto below = positive_part(t0, t1, l0, l1);
    // The two parts are disjoint; add them in parameter order.
    if (above && below && below->first < above->first) std::swap(above, below);
    if (above) add(*above);
    if (below) add(*below);
  }
  return spans;
}

void HorizonBuffer::raise(int column, double y) {
  if (column < 0 || column >= width()) return;
  upper_[column] = std::max(upper_[column], y);
  lower_[column] = std::min(lower_[column], y);
}

void HorizonBuffer::update(Point2 a, Point2 b) {
  const double lo = std::min(a.x, b.x);
  const double hi = std::max(a.x, b.x);
  const int first = std::max(0, static_cast<int>(std::ceil(lo)));
  const int last = std::min(width() - 1, static_cast<int>(std::floor(hi)));
  for (int c = first; c <= last; ++c) {
    if (a.x == b.x) {
      raise(c, a.y);
      raise(c, b.y);
    } else {
      const double t = (c - a.x) / (b.x - a.x);
      raise(c, a.y + t * (b.y - a.y));
    }
  }
  // Vertices are the only kinks; pin them onto both neighbouring columns so
  // the interpolated horizon never dips below a drawn peak.
  for (Point2 p : {a, b}) {
    raise(static_cast<int>(std::floor(p.x)), p.y);
    raise(static_cast<int>(std::ceil(p.x)), p.y);
  }
}

// --- rectangular-domain surfaces ------------------------------------------

namespace {

using Interval01 = std::pair<double, double>;

// Triangles of the strip between the line being drawn and an already drawn
// neighbour. The horizon only knows about lines that are complete, so
// occlusion inside the current strip is resolved exactly against these.
class StripOccluder {
 public:
  StripOccluder(const std::vector<Vec3>& cam, const Projection& projection)
      : cam_(cam), projection_(projection) {}

  void clear() {
    tris_.clear();
    buckets_.clear();
  }

  void add(int a, int b, int c) { tris_.push_back({a, b, c}); }

  // Call after the last add().
  void index() {
    xmin_ = kInf;
    double xmax = -kInf;
    for (const auto& t : tris_) {
      for (int v : t) {
        xmin_ = std::min(xmin_, screen(v).x);
        xmax = std::max(xmax, screen(v).x);
      }
    }
    const int n = std::max<int>(1, static_cast<int>(tris_.size()));
    buckets_.assign(n, {});
    bucket_width_ = xmax > xmin_ ? (xmax - xmin_) / n : 1.0;
    for (int k = 0; k < static_cast<int>(tris_.size()); ++k) {
      const auto& t = tris_[k];
      const double lo = std::min({screen(t[0]).x, screen(t[1]).x, screen(t[2]).x});
      const double hi = std::max({screen(t[0]).x, screen(t[1]).x, screen(t[2]).x});
      for (int b = bucket(lo); b <= bucket(hi); ++b) buckets_[b].push_back(k);
    }
    stamp_.assign(tris_.size(), 0);
    round_ = 0;
  }

  // Open intervals of the 3D parameter along a -> b hidden by some triangle.
  std::vector<Interval01> hidden(int a, int b) {
    std::vector<Interval01> out;
    if (tris_.empty()) return out;
    const double lo = std::min(screen(a).x, screen(b).x);
    const double hi = std::max(screen(a).x, screen(b).x);
    ++round_;
    for (int bk = bucket(lo); bk <= bucket(hi); ++bk) {
      for (int k : buckets_[bk]) {
        if (stamp_[k] == round_) continue;
        stamp_[k] = round_;
        if (auto h = hidden_by(tris_[k], a, b)) out.push_back(*h);
      }
    }
    return out;
  }

  bool covers(int v) {
    if (tris_.empty()) return false;
    ++round_;
    const int bk = bucket(screen(v).x);
    for (int k : buckets_[bk]) {
      if (stamp_[k] == round_) continue;
      stamp_[k] = round_;
      const auto& t = tris_[k];
      if (t[0] == v || t[1] == v || t[2] == v) continue;
      if (hidden_by(t, v, v)) return true;
    }
    return false;
  }

 private:
  struct Affine {
    double f0;
    double f1;
  };

  Point2 screen(int v) const {
    const Vec3& q = cam_[v];
    if (projection_.kind == Projection::Kind::orthographic) return {q.x, q.y};
    const double s = projection_.distance / (projection_.distance - q.z);
    return {q.x * s, q.y * s};
  }

  int bucket(double x) const {
    const int b = static_cast<int>((x - xmin_) / bucket_width_);
    return std::clamp(b, 0, static_cast<int>(buckets_.size()) - 1);
  }

  // Signed side of p relative to the edge x -> y, in screen terms.
  double edge_side(int x, int y, Vec3 p) const {
    const Vec3 &X = cam_[x], &Y = cam_[y];
    if (projection_.kind == Projection::Kind::orthographic) {
      return (Y.x - X.x) * (p.y - X.y) - (Y.y - X.y) * (p.x - X.x);
    }
    const Vec3 eye{0, 0, projection_.distance};
    return dot(p - eye, cross(X - eye, Y - eye));
  }

  std::optional<Interval01> hidden_by(std::array<int, 3> t, int a, int b) const {
    const bool has_a = t[0] == a || t[1] == a || t[2] == a;
    const bool has_b = t[0] == b || t[1] == b || t[2] == b;
    if (a != b && has_a && has_b) return std::nullopt;
    // Rotate a shared vertex to the front so every function that should
    // vanish there evaluates to an exact zero.
    const int shared = has_a ? a : (has_b ? b : -1);
    while (shared >= 0 && t[0] != shared) std::rotate(t.begin(), t.begin() + 1, t.end());

    const Vec3 A = cam_[a], B = cam_[b];
    std::array<Affine, 4> fs;
    const std::array<std::array<int, 3>, 3> edges{{{t[0], t[1], t[2]}, {t[0], t[2], t[1]}, {t[1], t[2], t[0]}}};
    for (int e = 0; e < 3; ++e) {
      const auto [x, y, opposite] = edges[e];
      const double orient = edge_side(x, y, cam_[opposite]);
      if (orient == 0.0) return std::nullopt;  // edge-on
      const double s = orient > 0 ? 1.0 : -1.0;
      fs[e] = {s * edge_side(x, y, A), s * edge_side(x, y, B)};
    }
    const Vec3 T0 = cam_[t[0]];
    const Vec3 n = cross(cam_[t[1]] - T0, cam_[t[2]] - T0);
    const double toward = projection_.kind == Projection::Kind::orthographic
                              ? n.z
                              : dot(n, Vec3{0, 0, projection_.distance} - T0);
    if (toward == 0.0) return std::nullopt;
    const double s = toward > 0 ? -1.0 : 1.0;  // positive behind the plane
    fs[3] = {s * dot(n, A - T0), s * dot(n, B - T0)};

    double lo = 0.0, hi = 1.0;
    for (const auto [f0, f1] : fs) {
      if (f0 <= 0 && f1 <= 0) return std::nullopt;
      if (f0 > 0 && f1 > 0) continue;
      const double tc = f0 / (f0 - f1);
      if (f0 > 0) {
        hi = std::min(hi, tc);
      } else {
        lo = std::max(lo, tc);
      }
    }
    if (a == b) return Interval01{0.0, 1.0};
    // Slivers this thin are rounding noise at a shared vertex.
    if (!(hi - lo > 1e-9)) return std::nullopt;
    return Interval01{lo, hi};
  }

  const std::vector<Vec3>& cam_;
  Projection projection_;
  std::vector<std::array<int, 3>> tris_;
  std::vector<std::vector<int>> buckets_;
  std::vector<unsigned> stamp_;
  unsigned round_ = 0;
  double xmin_ = 0.0;
  double bucket_width_ = 1.0;
};

// Removes open intervals from a sorted list of closed spans.
std::vector<Interval01> subtract(std::vector<Interval01> spans, std::vector<Interval01> holes) {
  std::sort(holes.begin(), holes.end());
  for (const auto& [h0, h1] : holes) {
    std::vector<Interval01> next;
    for (const auto& [s0, s1] : spans) {
      if (h1 <= s0 || h0 >= s1) {
        next.push_back({s0, s1});
        continue;
      }
      if (h0 > s0) next.push_back({s0, h0});
      if (h1 < s1) next.push_back({h1, s1});
    }
    spans = std::move(next);
  }
  return spans;
}

}  // namespace

RectRenderResult render_rect_surface(const ScalarGrid& grid,
                                     const EulerAngles& e,
                                     const Projection& projection,
                                     PlotContext& ctx,
                                     const RectRenderOptions& options) {
  check_grid(grid);
  if (ctx.sealed()) throw Error(Errc::sealed_context, "plot context is sealed");
  HorizonBuffer horizon(options.width);

  // Hidden lines are resolved before the final in-plane spin by phi, which
  // does not change visibility. In this upright frame the world z axis has no
  // screen-x component, so under orthographic projection every grid line
  // projects to a function of screen x.
  const Mat3 upright = rot_x(e.theta) * rot_z(e.psi);
  const ViewTransform view{upright, projection};
  const double spin_c = std::cos(e.phi);
  const double spin_s = std::sin(e.phi);
  auto spin = [&](Point2 p) -> Point2 {
    return {spin_c * p.x - spin_s * p.y, spin_s * p.x + spin_c * p.y};
  };

  const int nx = grid.nx;
  const int ny = grid.ny;
  std::vector<Projected> pts(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      pts[j * nx + i] = project(view, {grid.x_at(i), grid.y_at(j), grid.at(i, j)});
    }
  }

  RectRenderResult result;
  result.vertex_visible.assign(pts.size(), 0);
  // Sweep the family of grid lines that runs closest to screen-horizontal.
  const bool rows = std::abs(upright(0, 0)) >= std::abs(upright(0, 1));
  result.swept_rows = rows;
  const int lines = rows ? ny : nx;
  const int along = rows ? nx : ny;
  auto vid = [&](int line, int m) { return rows ? line * nx + m : m * nx + line; };

  // Near-to-far order from the depth of each line's midpoint on the mean
  // height plane. For orthographic views this is exact: occlusion between two
  // grid lines always runs in the same direction.
  const double zmean =
      std::accumulate(grid.z.begin(), grid.z.end(), 0.0) / grid.z.size();
  std::vector<double> nearness(lines);
  for (int k = 0; k < lines; ++k) {
    const Vec3 mid = rows ? Vec3{0.5 * (grid.x_range.lo + grid.x_range.hi), grid.y_at(k), zmean}
                          : Vec3{grid.x_at(k), 0.5 * (grid.y_range.lo + grid.y_range.hi), zmean};
    const Vec3 q = upright * mid;
    if (projection.kind == Projection::Kind::orthographic) {
      nearness[k] = q.z;
    } else {
      const Vec3 d = q - Vec3{0, 0, projection.distance};
      nearness[k] = -std::sqrt(dot(d, d));
    }
  }
  result.order.resize(lines);
  std::iota(result.order.begin(), result.order.end(), 0);
  std::stable_sort(result.order.begin(), result.order.end(),
                   [&](int a, int b) { return nearness[a] > nearness[b]; });

  double xmin = kInf;
  double xmax = -kInf;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.xy.x);
    xmax = std::max(xmax, p.xy.x);
  }
  const double span = xmax > xmin ? xmax - xmin : 1.0;
  const double scale = (options.width - 1) / span;
  auto to_horizon = [&](const Projected& p) -> Point2 {
    return {(p.xy.x - xmin) * scale, p.xy.y};
  };

  std::optional<Point2> pen;
  auto emit = [&](Point2 a, Point2 b) {
    if (pen != a) {
      const Point2 s = spin(a);
      ctx.move(s.x, s.y);
    }
    const Point2 s = spin(b);
    ctx.draw(s.x, s.y);
    pen = b;
  };

  std::vector<Vec3> cam(pts.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) cam[j * nx + i] = upright * Vec3{grid.x_at(i), grid.y_at(j), grid.at(i, j)};
  }
  // Parameter along a projected segment for a parameter along its 3D source.
  auto screen_t = [&](int a, int b, double u) {
    if (projection.kind == Projection::Kind::orthographic) return u;
    const Point2 pa = pts[a].xy, pb = pts[b].xy;
    const Point2 p = project({Mat3::identity(), projection}, cam[a] + u * (cam[b] - cam[a])).xy;
    const Point2 d = pb - pa;
    const double len2 = d.x * d.x + d.y * d.y;
    return len2 > 0 ? std::clamp(((p.x - pa.x) * d.x + (p.y - pa.y) * d.y) / len2, 0.0, 1.0) : u;
  };

  struct Segment {
    int a;
    int b;
  };
  std::vector<char> drawn(lines, 0);
  std::vector<Segment> segments;
  std::vector<Segment> cross_edges;
  std::vector<Segment> diagonals;
  StripOccluder strip(cam, projection);
  for (int k : result.order) {
    // The surface between grid lines is triangulated along the (i, j) to
    // (i + 1, j + 1) diagonals. Diagonals are never drawn, and cross edges
    // only in mesh style, but all of them occlude.
    strip.clear();
    cross_edges.clear();
    diagonals.clear();
    for (int nb : {k - 1, k + 1}) {
      if (nb < 0 || nb >= lines || !drawn[nb]) continue;
      const int lo = std::min(k, nb);
      for (int m = 0; m < along; ++m) cross_edges.push_back({vid(nb, m), vid(k, m)});
      for (int m = 0; m + 1 < along; ++m) {
        diagonals.push_back({vid(lo, m), vid(lo + 1, m + 1)});
        strip.add(vid(lo, m), vid(lo, m + 1), vid(lo + 1, m + 1));
        strip.add(vid(lo, m), vid(lo + 1, m + 1), vid(lo + 1, m));
      }
    }
    strip.index();

    segments.clear();
    for (int m = 0; m + 1 < along; ++m) segments.push_back({vid(k, m), vid(k, m + 1)});
    if (options.style == MeshStyle::mesh) {
      segments.insert(segments.end(), cross_edges.begin(), cross_edges.end());
    }

    for (int m = 0; m < along; ++m) {
      const int v = vid(k, m);
      const Point2 h = to_horizon(pts[v]);
      result.vertex_visible[v] = horizon.visible(h.x, h.y) && !strip.covers(v) ? 1 : 0;
    }

    for (const auto& seg : segments) {
      const Point2 a = pts[seg.a].xy;
      const Point2 b = pts[seg.b].xy;
      std::vector<Interval01> holes = strip.hidden(seg.a, seg.b);
      for (auto& [u0, u1] : holes) {
        u0 = screen_t(seg.a, seg.b, u0);
        u1 = screen_t(seg.a, seg.b, u1);
      }
      const auto spans =
          subtract(horizon.visible_spans(to_horizon(pts[seg.a]), to_horizon(pts[seg.b])), holes);
      for (auto [t0, t1] : spans) {
        auto at = [&](double t) -> Point2 {
          if (t == 0.0) return a;
          if (t == 1.0) return b;
          return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        };
        emit(at(t0), at(t1));
      }
    }

    for (int m = 0; m + 1 < along; ++m) {
      horizon.update(to_horizon(pts[vid(k, m)]), to_horizon(pts[vid(k, m + 1)]));
    }
    for (const auto& seg : cross_edges) horizon.update(to_horizon(pts[seg.a]), to_horizon(pts[seg.b]));
    for (const auto& seg : diagonals) horizon.update(to_horizon(pts[seg.a]), to_horizon(pts[seg.b]));
    drawn[k] = 1;
    if (options.on_pass) options.on_pass(horizon);
  }
  return result;
}

// --- closed parametric surfaces ---------------------------------------------

ClosedRenderResult render_closed_surface(const ParametricGrid& grid,
                                         const EulerAngles& e,
                                         const Projection& projection,
                                         PlotContext& ctx) {
  check_grid(grid);
  if (ctx.sealed()) throw Error(Errc::sealed_context, "plot context is sealed");

  const ViewTransform view{rotation_matrix(e), projection};
  const int nu = grid.nu;
  const int nv = grid.nv;
  std::vector<Vec3> rotated(grid.points.size());
  std::vector<Point2> screen(grid.points.size());
  for (std::size_t k = 0; k < grid.points.size(); ++k) {
    rotated[k] = view.rotation * grid.points[k];
    screen[k] = project(view, grid.points[k]).xy;
  }

  ClosedRenderResult result;
  result.facets_u = grid.wrap_u ? nu : nu - 1;
  result.facets_v = grid.wrap_v ? nv : nv - 1;
  result.facet_drawn.assign(static_cast<std::size_t>(result.facets_u) * result.facets_v, 0);

  auto idx = [&](int i, int j) { return (j % nv) * nu + (i % nu); };
  // u-edge (i,j): (i,j)->(i+1,j); v-edge (i,j): (i,j)->(i,j+1).
  std::vector<char> u_done(grid.points.size(), 0);
  std::vector<char> v_done(grid.points.size(), 0);

  std::optional<Point2> pen;
  auto draw_edge = [&](int from, int to) {
    if (grid.points[from] == grid.points[to]) return;  // collapsed at a pole
    if (pen != screen[from]) ctx.move(screen[from].x, screen[from].y);
    ctx.draw(screen[to].x, screen[to].y);
    pen = screen[to];
    ++result.edges_drawn;
  };
  auto u_edge = [&](int i, int j) {
    const int from = idx(i, j);
    if (u_done[from]) return;
    u_done[from] = 1;
    draw_edge(from, idx(i + 1, j));
  };
  auto v_edge = [&](int i, int j) {
    const int from = idx(i, j);
    if (v_done[from]) return;
    v_done[from] = 1;
    draw_edge(from, idx(i, j + 1));
  };

  for (int j = 0; j < result.facets_v; ++j) {
    for (int i = 0; i < result.facets_u; ++i) {
      const Vec3& p00 = rotated[idx(i, j)];
      const Vec3& p10 = rotated[idx(i + 1, j)];
      const Vec3& p11 = rotated[idx(i + 1, j + 1)];
      const Vec3& p01 = rotated[idx(i, j + 1)];
      // Diagonal cross product: twice du x dv, robust where a pole collapses
      // one facet edge.
      const Vec3 normal = cross(p11 - p00, p01 - p10);
      bool front;
      if (projection.kind == Projection::Kind::orthographic) {
        front = normal.z > 0.0;
      } else {
        const Vec3 centroid = 0.25 * (p00 + p10 + p11 + p01);
        front = dot(Vec3{0, 0, projection.distance} - centroid, normal) > 0.0;
      }
      if (!front) continue;
      result.facet_drawn[j * result.facets_u + i] = 1;
      u_edge(i, j);
      v_edge(i + 1, j);
      u_edge(i, j + 1);
      v_edge(i, j);
    }
  }
  return result;
}

}  // namespace penplot
