#include "sgwe/field.hpp"

#include <algorithm>
#include <cmath>

#include "sgwe/error.hpp"

namespace sgwe {

namespace {
// Unlike std::max, lets a NaN through so corrupted fields are not reported as small.
double nan_max(double m, double v) { return (v > m || std::isnan(v)) && !std::isnan(m) ? v : m; }
}  // namespace

Field2::Field2(const Grid2& grid, Frame frame, Arity arity)
    : grid_(grid),
      frame_(frame),
      arity_(arity),
      planes_(static_cast<int>(arity), Plane(grid.cells())) {}

Field2 Field2::sample(const Grid2& grid, Frame frame,
                      const std::function<double(double, double)>& fn) {
  Field2 f(grid, frame);
  const int n = grid.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.at(0, i, j) = fn(grid.coord(i), grid.coord(j));
  return f;
}

Field2 Field2::sample2(const Grid2& grid, Frame frame,
                       const std::function<double(double, double)>& fn0,
                       const std::function<double(double, double)>& fn1) {
  Field2 f(grid, frame, Arity::vector2);
  const int n = grid.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      f.at(0, i, j) = fn0(grid.coord(i), grid.coord(j));
      f.at(1, i, j) = fn1(grid.coord(i), grid.coord(j));
    }
  return f;
}

Field2 Field2::with_frame(Frame f) const {
  Field2 out = *this;
  out.frame_ = f;
  return out;
}

Field2 Field2::relabelled(const Grid2& grid) const {
  if (grid.size() != grid_.size())
    throw ConfigError("relabelling requires the same point count");
  Field2 out = *this;
  out.grid_ = grid;
  return out;
}

double Field2::max_abs() const {
  double m = 0.0;
  for (const auto& p : planes_)
    for (const auto& v : p) m = nan_max(m, std::abs(v));
  return m;
}

double Field2::max_imag() const {
  double m = 0.0;
  for (const auto& p : planes_)
    for (const auto& v : p) m = nan_max(m, std::abs(v.imag()));
  return m;
}

double Field2::l2_norm() const {
  double s = 0.0;
  for (const auto& p : planes_)
    for (const auto& v : p) s += std::norm(v);
  const double dx = grid_.spacing();
  return std::sqrt(s) * dx;
}

void Field2::require_compatible(const Field2& o) const {
  if (!(grid_ == o.grid_) || frame_ != o.frame_ || arity_ != o.arity_)
    throw ConfigError("field arithmetic on incompatible grid/frame/arity");
}

Field2& Field2::operator+=(const Field2& o) {
  require_compatible(o);
  for (std::size_t c = 0; c < planes_.size(); ++c)
    for (std::size_t k = 0; k < planes_[c].size(); ++k)
      planes_[c][k] += o.planes_[c][k];
  return *this;
}

Field2& Field2::operator-=(const Field2& o) {
  require_compatible(o);
  for (std::size_t c = 0; c < planes_.size(); ++c)
    for (std::size_t k = 0; k < planes_[c].size(); ++k)
      planes_[c][k] -= o.planes_[c][k];
  return *this;
}

Field2& Field2::operator*=(double s) {
  for (auto& p : planes_)
    for (auto& v : p) v *= s;
  return *this;
}

Field2& Field2::multiply_pointwise(const Field2& scalar) {
  if (!(grid_ == scalar.grid_) || scalar.components() != 1)
    throw ConfigError("pointwise product needs a scalar field on the same grid");
  for (auto& p : planes_)
    for (std::size_t k = 0; k < p.size(); ++k) p[k] *= scalar.planes_[0][k];
  return *this;
}

Field2 operator+(Field2 a, const Field2& b) { return a += b; }
Field2 operator-(Field2 a, const Field2& b) { return a -= b; }
Field2 operator*(double s, Field2 a) { return a *= s; }

double max_diff(const Field2& a, const Field2& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw ConfigError("max_diff on incompatible fields");
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (std::size_t k = 0; k < a.plane(c).size(); ++k)
      m = nan_max(m, std::abs(a.plane(c)[k] - b.plane(c)[k]));
  return m;
}

Spectrum2::Spectrum2(const Grid2& grid, Frame frame, Arity arity)
    : grid_(grid),
      frame_(frame),
      arity_(arity),
      planes_(static_cast<int>(arity), Plane(grid.cells())) {}

cplx& Spectrum2::mode(int c, int m, int n) {
  const int N = grid_.size();
  return planes_.at(c)[grid_.index((m + N) % N, (n + N) % N)];
}

const cplx& Spectrum2::mode(int c, int m, int n) const {
  const int N = grid_.size();
  return planes_.at(c)[grid_.index((m + N) % N, (n + N) % N)];
}

double Spectrum2::parseval_factor() const {
  const double w = 2.0 * grid_.half_width();
  return w * w;
}

}  // namespace sgwe
