#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sgwe/field.hpp"

namespace sgwe {

Spectrum2 dft2(const Field2& f);
Field2 idft2(const Spectrum2& s);

/// Multiplies by i*tau (Axis::first) or i*xi (Axis::second) in frequency.
/// The unpaired Nyquist mode is zeroed so real fields stay real.
Field2 spectral_derivative(const Field2& f, Axis axis);

/// In-place spectral transforms of a single plane; same normalization as
/// dft2/idft2. Exposed for modules that work on raw planes.
Plane forward_plane(const Plane& values, const Grid2& grid);
Plane inverse_plane(const Plane& coeffs, const Grid2& grid);

/// Evaluates the Fourier series of one component on the tensor lattice
/// firsts x seconds. Result is row-major (firsts.size() rows).
std::vector<cplx> evaluate_tensor(const Spectrum2& s, int component,
                                  std::span<const double> firsts,
                                  std::span<const double> seconds);

/// Evaluates the Fourier series of one component at arbitrary points.
///
/// Cost is O(N^2 (P + Q) + N P Q) where P and Q are the numbers of distinct
/// first and second coordinates (merged within 1e-12), so lattices whose
/// points share few coordinate values (rotations of a grid) stay cheap.
std::vector<cplx> evaluate_points(
    const Spectrum2& s, int component,
    std::span<const std::pair<double, double>> points);

/// Band-limited interpolation of a periodic 1-D grid function sampled at
/// x_i = -L + i*2L/N.
std::vector<double> interpolate_periodic(std::span<const double> values,
                                         double half_width,
                                         std::span<const double> targets);

}  // namespace sgwe
