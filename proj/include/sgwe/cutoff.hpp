#pragma once

#include "sgwe/field.hpp"

namespace sgwe {

/// Even cutoffs eta = chi with eta == 1 on [-2, 2] and support in [-4, 4],
/// built from the dyadic bump as eta(x) = bump_profile(x / 2), plus the
/// averaging bump psi = eta / integral(eta) used to remove the data mean.
struct CutoffPair {
  /// Integral of eta over the line (exactly 6 for this profile).
  static constexpr double kEtaIntegral = 6.0;

  static double eta(double x);
  static double chi(double x) { return eta(x); }
  static double psi(double x) { return eta(x) / kEtaIntegral; }
  static double eta_scaled(double x, double t) { return eta(x / t); }
};

/// eta_T(alpha) chi_T(beta) sampled on a grid (scalar field).
Field2 cutoff_window(const Grid2& grid, Frame frame, double t = 1.0);

/// f multiplied pointwise by eta_T(alpha) chi_T(beta).
Field2 localize(const Field2& f, double t = 1.0);

}  // namespace sgwe
