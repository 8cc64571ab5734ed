#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "sgwe/grid.hpp"

namespace sgwe {

using cplx = std::complex<double>;
/// One N x N component stored row-major (first axis is the row index).
using Plane = std::vector<cplx>;

/// Grid function with a frame tag; R^2-valued maps carry two planes.
class Field2 {
 public:
  Field2(const Grid2& grid, Frame frame, Arity arity = Arity::scalar);

  /// Samples fn(x, y) for every component-independent scalar field.
  static Field2 sample(const Grid2& grid, Frame frame,
                       const std::function<double(double, double)>& fn);
  /// Samples a two-component field.
  static Field2 sample2(const Grid2& grid, Frame frame,
                        const std::function<double(double, double)>& fn0,
                        const std::function<double(double, double)>& fn1);

  const Grid2& grid() const { return grid_; }
  Frame frame() const { return frame_; }
  Arity arity() const { return arity_; }
  int components() const { return static_cast<int>(planes_.size()); }

  Plane& plane(int c) { return planes_.at(c); }
  const Plane& plane(int c) const { return planes_.at(c); }
  cplx& at(int c, int i, int j) { return planes_[c][grid_.index(i, j)]; }
  const cplx& at(int c, int i, int j) const {
    return planes_[c][grid_.index(i, j)];
  }

  /// Same grid, frame and arity, all zeros.
  Field2 zeros_like() const { return Field2(grid_, frame_, arity_); }
  /// Copy of the data relabelled with another frame.
  Field2 with_frame(Frame f) const;
  /// Copy of the data relabelled onto a grid with the same point count.
  Field2 relabelled(const Grid2& grid) const;

  double max_abs() const;
  double max_imag() const;
  /// sqrt(sum |v|^2 dx^2) over all components.
  double l2_norm() const;

  Field2& operator+=(const Field2& o);
  Field2& operator-=(const Field2& o);
  Field2& operator*=(double s);
  /// Pointwise product with a scalar field (broadcast over components).
  Field2& multiply_pointwise(const Field2& scalar);

 private:
  void require_compatible(const Field2& o) const;

  Grid2 grid_;
  Frame frame_;
  Arity arity_;
  std::vector<Plane> planes_;
};

Field2 operator+(Field2 a, const Field2& b);
Field2 operator-(Field2 a, const Field2& b);
Field2 operator*(double s, Field2 a);

/// sup over all components and points of |a - b|.
double max_diff(const Field2& a, const Field2& b);

/// Fourier-series coefficients of a Field2.
///
/// Normalization: f(x_i, y_j) = sum_{m,n} c[m,n] exp(i(tau_m x_i + xi_n y_j)),
/// so a single grid mode has unit coefficient and
/// sum |f|^2 dx^2 = (2L)^2 * sum |c|^2. Coefficients are stored in FFT order.
class Spectrum2 {
 public:
  Spectrum2(const Grid2& grid, Frame frame, Arity arity);

  const Grid2& grid() const { return grid_; }
  Frame frame() const { return frame_; }
  Arity arity() const { return arity_; }
  int components() const { return static_cast<int>(planes_.size()); }
  Plane& plane(int c) { return planes_.at(c); }
  const Plane& plane(int c) const { return planes_.at(c); }

  /// Coefficient of the signed mode (m, n), m, n in [-N/2, N/2).
  cplx& mode(int c, int m, int n);
  const cplx& mode(int c, int m, int n) const;

  /// (2L)^2, the factor in sum |f|^2 dx^2 = parseval_factor * sum |c|^2.
  double parseval_factor() const;

 private:
  Grid2 grid_;
  Frame frame_;
  Arity arity_;
  std::vector<Plane> planes_;
};

}  // namespace sgwe
