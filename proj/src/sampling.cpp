#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "penplot/error.hpp"
#include "penplot/surface3d.hpp"

namespace penplot {

namespace {

void check_sampling_args(Interval x_range, Interval y_range, Resolution res) {
  if (res.n < 2) throw Error(Errc::validation, "resolution must be >= 2");
  if (!(x_range.hi > x_range.lo) || !(y_range.hi > y_range.lo) ||
      !std::isfinite(x_range.lo) || !std::isfinite(x_range.hi) ||
      !std::isfinite(y_range.lo) || !std::isfinite(y_range.hi)) {
    throw Error(Errc::invalid_grid, "sampling ranges must be finite and non-degenerate");
  }
}

ScalarGrid empty_grid(Interval x_range, Interval y_range, Resolution res) {
  ScalarGrid grid;
  grid.nx = res.n;
  grid.ny = res.n;
  grid.x_range = x_range;
  grid.y_range = y_range;
  grid.z.resize(static_cast<std::size_t>(res.n) * res.n);
  return grid;
}

[[noreturn]] void throw_non_finite(double x, double y) {
  throw Error(Errc::non_finite_sample,
              "function is not finite at (" + std::to_string(x) + ", " +
                  std::to_string(y) + ")");
}

}  // namespace

namespace serial {

ScalarGrid sample_scalar(const ScalarFunction& f, Interval x_range,
                         Interval y_range, Resolution res) {
  check_sampling_args(x_range, y_range, res);
  ScalarGrid grid = empty_grid(x_range, y_range, res);
  const int n = res.n;
  for (int j = 0; j < n; ++j) {
    const double y = sample_position(y_range, j, n);
    for (int i = 0; i < n; ++i) {
      const double x = sample_position(x_range, i, n);
      const double v = f(x, y);
      if (!std::isfinite(v)) throw_non_finite(x, y);
      grid.z[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return grid;
}

}  // namespace serial

ScalarGrid sample_scalar(const ScalarFunction& f, Interval x_range,
                         Interval y_range, Resolution res) {
  check_sampling_args(x_range, y_range, res);
  ScalarGrid grid = empty_grid(x_range, y_range, res);
  const int n = res.n;
  const std::int64_t total = static_cast<std::int64_t>(n) * n;
  // Smallest offending index, so the error matches the serial scan.
  std::int64_t first_bad = total;

#pragma omp parallel for schedule(static) reduction(min : first_bad)
  for (int j = 0; j < n; ++j) {
    const double y = sample_position(y_range, j, n);
    for (int i = 0; i < n; ++i) {
      const double v = f(sample_position(x_range, i, n), y);
      const std::int64_t k = static_cast<std::int64_t>(j) * n + i;
      grid.z[k] = v;
      if (!std::isfinite(v) && k < first_bad) first_bad = k;
    }
  }

  if (first_bad < total) {
    throw_non_finite(sample_position(x_range, static_cast<int>(first_bad % n), n),
                     sample_position(y_range, static_cast<int>(first_bad / n), n));
  }
  return grid;
}

}  // namespace penplot
