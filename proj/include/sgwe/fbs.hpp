#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>

#include "sgwe/field.hpp"

namespace sgwe {

/// Hurst indices of the sheet, one per null axis.
struct HurstPair {
  double h1 = 0.85;
  double h2 = 0.85;

  /// Throws ConfigError unless both lie in (0, 1).
  void validate() const;
  /// Throws ConfigError unless both exceed s (solver regime).
  void require_above(double s) const;
};

/// R_H(a, b) = (a^2H + b^2H - |a - b|^2H) / 2 for a, b >= 0.
double covariance_R(double hurst, double a, double b);

/// One realization of the fractional Brownian sheet on a null grid.
struct FbsSample {
  Field2 sheet;       // Xi at grid points
  Field2 derivative;  // mixed cell increments divided by dx^2
  std::uint64_t seed = 0;
  HurstPair hurst;

  const Grid2& grid() const { return sheet.grid(); }
  /// Same realization restricted to every other grid point (N/2 points).
  FbsSample coarsened() const;
};

/// Mixed second difference quotient over cell [i, i+1] x [j, j+1], periodic.
Field2 increment_field(const Field2& sheet);

/// Exact sampler: the covariance is a tensor product, so with per-axis
/// Cholesky factors L1, L2 the quadrant sample is L1 Z L2^T. The quadrant
/// holds the N/2 positive coordinates dx..L per axis; the full grid follows
/// by even reflection since the covariance only sees |alpha|, |beta|.
class FbsSampler {
 public:
  FbsSampler(const Grid2& grid, HurstPair hurst);

  /// Per-axis covariance on the positive coordinates dx, 2dx, ..., L.
  static Eigen::MatrixXd axis_covariance(const Grid2& grid, double hurst);

  const Eigen::MatrixXd& factor(int axis) const { return axis == 0 ? l1_ : l2_; }
  const Grid2& grid() const { return grid_; }
  HurstPair hurst() const { return hurst_; }

  /// Deterministic in (grid, hurst, seed).
  FbsSample sample(std::uint64_t seed) const;
  /// Sheet built from a caller-supplied (N/2) x (N/2) standard normal matrix.
  FbsSample sample_from_normals(const Eigen::MatrixXd& z, std::uint64_t seed = 0) const;
  /// Quadrant values only, for Monte Carlo loops.
  Eigen::MatrixXd quadrant(std::uint64_t seed) const;

 private:
  Grid2 grid_;
  HurstPair hurst_;
  Eigen::MatrixXd l1_;
  Eigen::MatrixXd l2_;
};

FbsSample sample_sheet(const Grid2& grid, HurstPair hurst, std::uint64_t seed);

/// Xi(a2,b2) - Xi(a2,b1) - Xi(a1,b2) + Xi(a1,b1); corners must be grid points.
double rect_increment(const FbsSample& s, double a1, double a2, double b1, double b2);

/// Unbiased sample variance of rectangle increments; needs >= 100 values.
double rect_increment_variance(std::span<const double> increments);

/// mixed_norm(eta(alpha) eta(beta) Xi; h1p, h2p) with no constraint on h'.
double regularity_norm(const FbsSample& s, double h1p, double h2p,
                       const std::function<double(double)>& eta);
/// As regularity_norm, but requires h'_i < min(H1, H2).
double regularity_check(const FbsSample& s, double h1p, double h2p,
                        const std::function<double(double)>& eta);

}  // namespace sgwe
