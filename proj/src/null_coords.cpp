#include "sgwe/null_coords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/spectral.hpp"

namespace sgwe {
namespace {

constexpr double kSupportTol = 1e-12;

// Every significant source sample must map into the target window.
void check_window(const Field2& src, const Grid2& target, bool to_null_frame) {
  const Grid2& g = src.grid();
  const double cutoff = kSupportTol * src.max_abs();
  const double lim = target.half_width() + 1e-12;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) {
      double mag = 0.0;
      for (int c = 0; c < src.components(); ++c) mag = std::max(mag, std::abs(src.at(c, i, j)));
      if (mag <= cutoff) continue;
      const double a = g.coord(i), b = g.coord(j);
      const double p = to_null_frame ? a + b : 0.5 * (a + b);
      const double q = to_null_frame ? a - b : 0.5 * (a - b);
      if (std::abs(p) > lim || std::abs(q) > lim)
        throw DomainError(std::string("support leaves the ") +
                          (to_null_frame ? "null" : "cartesian") +
                          " window; enlarge the target grid or shrink the field");
    }
}

Field2 remap(const Field2& src, const Grid2& target, Frame frame, bool to_null_frame) {
  check_window(src, target, to_null_frame);
  const int n = target.size();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(target.cells());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = target.coord(i), b = target.coord(j);
      // Null target: (alpha, beta) -> (t, x); Cartesian target: (t, x) -> (alpha, beta).
      if (to_null_frame)
        pts.emplace_back(0.5 * (a + b), 0.5 * (a - b));
      else
        pts.emplace_back(a + b, a - b);
    }
  const Spectrum2 s = dft2(src);
  Field2 out(target, frame, src.arity());
  for (int c = 0; c < src.components(); ++c) {
    auto v = evaluate_points(s, c, pts);
    std::copy(v.begin(), v.end(), out.plane(c).begin());
  }
  return out;
}

}  // namespace

double cartesian_half_width(double null_half_width) {
  return null_half_width / std::numbers::sqrt2;
}

Field2 to_null(const Field2& u, const Grid2& null_grid) {
  if (u.frame() != Frame::cartesian) throw ConfigError("to_null expects a cartesian field");
  return remap(u, null_grid, Frame::null, true);
}

Field2 to_null(const Field2& u) {
  return to_null(u, Grid2(u.grid().half_width() * std::numbers::sqrt2, u.grid().size()));
}

Field2 from_null(const Field2& u_star, const Grid2& cartesian_grid) {
  if (u_star.frame() != Frame::null) throw ConfigError("from_null expects a null-frame field");
  return remap(u_star, cartesian_grid, Frame::cartesian, false);
}

Field2 from_null(const Field2& u_star) {
  return from_null(u_star, Grid2(cartesian_half_width(u_star.grid().half_width()),
                                 u_star.grid().size()));
}

double isomorphism_ratio(const Field2& u, double s, double delta) {
  if (s < delta) throw ConfigError("isomorphism ratio requires s >= delta");
  const double h = hyperbolic_norm(u, s, delta);
  if (h == 0.0) throw ConfigError("isomorphism ratio of the zero field is undefined");
  return mixed_norm(to_null(u), s, delta) / h;
}

RatioRange aggregate(std::span<const double> ratios) {
  if (ratios.empty()) throw ConfigError("no ratios to aggregate");
  auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  return {*lo, *hi};
}

}  // namespace sgwe
