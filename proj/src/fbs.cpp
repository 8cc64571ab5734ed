#include "sgwe/fbs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"

namespace sgwe {
namespace {

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov, int axis, double hurst) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // One diagonal jitter of 1e-12 * trace / n, then give up.
  Eigen::MatrixXd jittered = cov;
  const double jitter = 1e-12 * cov.trace() / static_cast<double>(cov.rows());
  jittered.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> retry(jittered);
  if (retry.info() != Eigen::Success)
    throw NumericalError("Cholesky failed on axis " + std::to_string(axis + 1) +
                         " (H=" + std::to_string(hurst) + ") after jitter");
  return retry.matrixL();
}

// Quadrant index of grid index i: -1 on the axis, else |alpha_i|/dx - 1.
int quadrant_slot(int i, int n) {
  const int d = std::abs(i - n / 2);
  return d - 1;
}

}  // namespace

void HurstPair::validate() const {
  if (!(h1 > 0.0 && h1 < 1.0 && h2 > 0.0 && h2 < 1.0))
    throw ConfigError("Hurst indices must lie in (0,1), got (" + std::to_string(h1) + ", " +
                      std::to_string(h2) + ")");
}

void HurstPair::require_above(double s) const {
  validate();
  if (!(h1 > s && h2 > s))
    throw ConfigError("solver requires Hurst indices above s=" + std::to_string(s));
}

double covariance_R(double hurst, double a, double b) {
  const double e = 2.0 * hurst;
  return 0.5 * (std::pow(a, e) + std::pow(b, e) - std::pow(std::abs(a - b), e));
}

Field2 increment_field(const Field2& sheet) {
  const Grid2& g = sheet.grid();
  const int n = g.size();
  const double inv = 1.0 / (g.spacing() * g.spacing());
  Field2 d = sheet.zeros_like();
  for (int c = 0; c < sheet.components(); ++c)
    for (int i = 0; i < n; ++i) {
      const int ip = (i + 1) % n;
      for (int j = 0; j < n; ++j) {
        const int jp = (j + 1) % n;
        d.at(c, i, j) = (sheet.at(c, ip, jp) - sheet.at(c, ip, j) - sheet.at(c, i, jp) +
                         sheet.at(c, i, j)) * inv;
      }
    }
  return d;
}

FbsSample FbsSample::coarsened() const {
  const Grid2& g = grid();
  const Grid2 coarse(g.half_width(), g.size() / 2);
  Field2 s(coarse, Frame::null);
  for (int i = 0; i < coarse.size(); ++i)
    for (int j = 0; j < coarse.size(); ++j) s.at(0, i, j) = sheet.at(0, 2 * i, 2 * j);
  Field2 d = increment_field(s);
  return FbsSample{std::move(s), std::move(d), seed, hurst};
}

Eigen::MatrixXd FbsSampler::axis_covariance(const Grid2& grid, double hurst) {
  const int m = grid.size() / 2;
  const double dx = grid.spacing();
  Eigen::MatrixXd cov(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) cov(p, q) = covariance_R(hurst, (p + 1) * dx, (q + 1) * dx);
  return cov;
}

FbsSampler::FbsSampler(const Grid2& grid, HurstPair hurst) : grid_(grid), hurst_(hurst) {
  hurst.validate();
  l1_ = cholesky_factor(axis_covariance(grid, hurst.h1), 0, hurst.h1);
  l2_ = hurst.h2 == hurst.h1 ? l1_ : cholesky_factor(axis_covariance(grid, hurst.h2), 1, hurst.h2);
}

Eigen::MatrixXd FbsSampler::quadrant(std::uint64_t seed) const {
  const int m = grid_.size() / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) z(p, q) = normal(rng);
  return l1_.triangularView<Eigen::Lower>() * z * l2_.transpose().triangularView<Eigen::Upper>();
}

FbsSample FbsSampler::sample_from_normals(const Eigen::MatrixXd& z, std::uint64_t seed) const {
  const int n = grid_.size();
  if (z.rows() != n / 2 || z.cols() != n / 2)
    throw ConfigError("normal matrix must be (N/2) x (N/2)");
  const Eigen::MatrixXd q = l1_ * z * l2_.transpose();
  Field2 sheet(grid_, Frame::null);
  for (int i = 0; i < n; ++i) {
    const int p = quadrant_slot(i, n);
    if (p < 0) continue;
    for (int j = 0; j < n; ++j) {
      const int r = quadrant_slot(j, n);
      if (r >= 0) sheet.at(0, i, j) = q(p, r);
    }
  }
  Field2 d = increment_field(sheet);
  return FbsSample{std::move(sheet), std::move(d), seed, hurst_};
}

FbsSample FbsSampler::sample(std::uint64_t seed) const {
  const int m = grid_.size() / 2;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd z(m, m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) z(p, q) = normal(rng);
  return sample_from_normals(z, seed);
}

FbsSample sample_sheet(const Grid2& grid, HurstPair hurst, std::uint64_t seed) {
  return FbsSampler(grid, hurst).sample(seed);
}

double rect_increment(const FbsSample& s, double a1, double a2, double b1, double b2) {
  const Grid2& g = s.grid();
  auto slot = [&](double x) {
    const double r = (x + g.half_width()) / g.spacing();
    const long k = std::lround(r);
    if (std::abs(r - static_cast<double>(k)) > 1e-9 || k < 0 || k >= g.size())
      throw DomainError("rectangle corner " + std::to_string(x) + " is not a grid point");
    return static_cast<int>(k);
  };
  const int i1 = slot(a1), i2 = slot(a2), j1 = slot(b1), j2 = slot(b2);
  const auto& v = s.sheet;
  return (v.at(0, i2, j2) - v.at(0, i2, j1) - v.at(0, i1, j2) + v.at(0, i1, j1)).real();
}

double rect_increment_variance(std::span<const double> increments) {
  if (increments.size() < 100) throw ConfigError("ensemble too small: need at least 100 samples");
  double mean = 0.0;
  for (double x : increments) mean += x;
  mean /= static_cast<double>(increments.size());
  double ss = 0.0;
  for (double x : increments) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(increments.size() - 1);
}

double regularity_norm(const FbsSample& s, double h1p, double h2p,
                       const std::function<double(double)>& eta) {
  const Grid2& g = s.grid();
  Field2 w = s.sheet;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) w.at(0, i, j) *= eta(g.coord(i)) * eta(g.coord(j));
  // H^{h1'} in alpha with H^{h2'} in beta, plus the swapped pairing.
  return mixed_norm(w, h1p, h2p);
}

double regularity_check(const FbsSample& s, double h1p, double h2p,
                        const std::function<double(double)>& eta) {
  const double cap = std::min(s.hurst.h1, s.hurst.h2);
  if (!(h1p < cap && h2p < cap))
    throw ConfigError("regularity exponents must stay below min(H1, H2)");
  return regularity_norm(s, h1p, h2p, eta);
}

}  // namespace sgwe
