#include "sgwe/lp_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgwe/error.hpp"
#include "sgwe/spectral.hpp"

namespace sgwe {
namespace {

double smooth_step(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double bracket(double x) { return std::sqrt(1.0 + x * x); }

// Support annulus of phi_j: [0,2] for j = 0, [2^(j-1), 2^(j+1)] otherwise.
bool in_support(int j, double x) {
  const double a = std::abs(x);
  if (j == 0) return a <= 2.0;
  return a >= std::ldexp(1.0, j - 1) && a <= std::ldexp(1.0, j + 1);
}

template <typename Weight>
double weighted_norm(const Spectrum2& s, Weight&& w) {
  const Grid2& g = s.grid();
  const int n = g.size();
  double acc = 0.0;
  for (int c = 0; c < s.components(); ++c) {
    const Plane& p = s.plane(c);
    for (int i = 0; i < n; ++i) {
      const double tau = g.frequency(i);
      for (int j = 0; j < n; ++j) acc += w(tau, g.frequency(j)) * std::norm(p[g.index(i, j)]);
    }
  }
  return std::sqrt(acc * s.parseval_factor());
}

}  // namespace

double bump_profile(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = smooth_step(2.0 - a);
  return up / (up + smooth_step(a - 1.0));
}

double DyadicPartition::phi(int j, double x) {
  if (j < 0) return 0.0;
  if (j == 0) return bump_profile(x);
  return bump_profile(std::ldexp(x, -j)) - bump_profile(std::ldexp(x, -(j - 1)));
}

DyadicPartition::DyadicPartition(const Grid2& grid) : grid_(grid), j_max_(0) {
  const double top = std::numbers::pi * (grid.size() / 2) / grid.half_width();
  while (std::ldexp(1.0, j_max_) < top) ++j_max_;
  if (j_max_ < 2)
    throw ConfigError("grid too coarse for a dyadic partition: need at least two shells");
  table_.assign(j_max_ + 1, std::vector<double>(grid.size()));
  for (int j = 0; j <= j_max_; ++j)
    for (int k = 0; k < grid.size(); ++k) table_[j][k] = phi(j, grid.frequency(k));
}

double DyadicPartition::value(int j, int k) const {
  if (j < 0 || j > j_max_) return 0.0;
  return table_[j][k];
}

PartitionAxioms check_partition_axioms(const DyadicPartition& p) {
  PartitionAxioms r;
  const Grid2& g = p.grid();
  for (int k = 0; k < g.size(); ++k) {
    double sum = 0.0;
    for (int j = 0; j <= p.max_index(); ++j) {
      const double v = p.value(j, k);
      sum += v;
      if (!in_support(j, g.frequency(k)))
        r.max_outside_support = std::max(r.max_outside_support, std::abs(v));
    }
    r.max_sum_error = std::max(r.max_sum_error, std::abs(sum - 1.0));
  }
  // First-order axiom: sup |2^j phi_j'| by centered differences over the annulus.
  for (int j = 0; j <= p.max_index(); ++j) {
    const double hi = std::ldexp(1.0, j + 1);
    const double lo = j == 0 ? 0.0 : std::ldexp(1.0, j - 1);
    const int samples = 20000;
    const double h = (hi - lo) / samples;
    double sup = 0.0;
    for (int i = 1; i < samples; ++i) {
      const double x = lo + i * h;
      const double d = (DyadicPartition::phi(j, x + 0.5 * h) - DyadicPartition::phi(j, x - 0.5 * h)) / h;
      sup = std::max(sup, std::ldexp(std::abs(d), j));
    }
    r.derivative_sup.push_back(sup);
  }
  return r;
}

const char* to_string(NormFamily f) {
  switch (f) {
    case NormFamily::product_ab: return "product_Hs_ab";
    case NormFamily::product_ba: return "product_Hs_ba";
    case NormFamily::mixed: return "mixed";
    case NormFamily::hyperbolic: return "hyperbolic";
    case NormFamily::besov_s22: return "besov_S22";
  }
  return "?";
}

Field2 lp_block(const Field2& f, int j, int k, const DyadicPartition& p) {
  if (j < 0 || k < 0 || j > p.max_index() || k > p.max_index()) return f.zeros_like();
  if (!(f.grid() == p.grid())) throw ConfigError("partition built on a different grid");
  const Grid2& g = f.grid();
  const int n = g.size();
  Spectrum2 s = dft2(f);
  for (int c = 0; c < s.components(); ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s.plane(c)[g.index(a, b)] *= p.value(j, a) * p.value(k, b);
  return idft2(s);
}

double product_norm(const Spectrum2& s, double s_exp, double delta, bool swapped) {
  const double e1 = swapped ? delta : s_exp;
  const double e2 = swapped ? s_exp : delta;
  const Grid2& g = s.grid();
  const int n = g.size();
  std::vector<double> w1(n), w2(n);
  for (int k = 0; k < n; ++k) {
    w1[k] = std::pow(bracket(g.frequency(k)), 2.0 * e1);
    w2[k] = std::pow(bracket(g.frequency(k)), 2.0 * e2);
  }
  double acc = 0.0;
  for (int c = 0; c < s.components(); ++c) {
    const Plane& p = s.plane(c);
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) row += w2[j] * std::norm(p[g.index(i, j)]);
      acc += w1[i] * row;
    }
  }
  return std::sqrt(acc * s.parseval_factor());
}

double product_norm(const Field2& f, double s_exp, double delta, bool swapped) {
  return product_norm(dft2(f), s_exp, delta, swapped);
}

double mixed_norm(const Spectrum2& s, double s_exp, double delta) {
  const double a = product_norm(s, s_exp, delta, false);
  const double b = product_norm(s, s_exp, delta, true);
  return std::sqrt(a * a + b * b);
}

double mixed_norm(const Field2& f, double s_exp, double delta) {
  return mixed_norm(dft2(f), s_exp, delta);
}

double hyperbolic_norm(const Spectrum2& s, double s_exp, double delta) {
  return weighted_norm(s, [=](double tau, double xi) {
    const double a = std::abs(tau), b = std::abs(xi);
    return std::pow(bracket(a + b), 2.0 * s_exp) * std::pow(bracket(a - b), 2.0 * delta);
  });
}

double hyperbolic_norm(const Field2& f, double s_exp, double delta) {
  return hyperbolic_norm(dft2(f), s_exp, delta);
}

std::vector<std::vector<double>> block_energies(const Spectrum2& s, const DyadicPartition& p) {
  if (!(s.grid() == p.grid())) throw ConfigError("partition built on a different grid");
  const Grid2& g = s.grid();
  const int n = g.size();
  const int jm = p.max_index();
  // |c|^2 summed over components, then contracted with phi_j^2 on each axis.
  std::vector<double> power(g.cells(), 0.0);
  for (int c = 0; c < s.components(); ++c)
    for (std::size_t q = 0; q < g.cells(); ++q) power[q] += std::norm(s.plane(c)[q]);
  std::vector<std::vector<double>> partial(jm + 1, std::vector<double>(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int j = 0; j <= jm; ++j) {
      const double w = p.value(j, a) * p.value(j, a);
      if (w == 0.0) continue;
      for (int b = 0; b < n; ++b) partial[j][b] += w * power[g.index(a, b)];
    }
  std::vector<std::vector<double>> e(jm + 1, std::vector<double>(jm + 1, 0.0));
  for (int j = 0; j <= jm; ++j)
    for (int k = 0; k <= jm; ++k) {
      double acc = 0.0;
      for (int b = 0; b < n; ++b) acc += p.value(k, b) * p.value(k, b) * partial[j][b];
      e[j][k] = acc * s.parseval_factor();
    }
  return e;
}

double besov_norm(const Spectrum2& s, double s1, double s2, const DyadicPartition& p) {
  const auto e = block_energies(s, p);
  double acc = 0.0;
  for (std::size_t j = 0; j < e.size(); ++j)
    for (std::size_t k = 0; k < e.size(); ++k)
      acc += std::exp2(2.0 * (s1 * j + s2 * k)) * e[j][k];
  return std::sqrt(acc);
}

double besov_norm(const Field2& f, double s1, double s2, const DyadicPartition& p) {
  return besov_norm(dft2(f), s1, s2, p);
}

double norm(const Field2& f, const NormSpec& spec, const DyadicPartition* p) {
  switch (spec.family) {
    case NormFamily::product_ab: return product_norm(f, spec.s, spec.delta, false);
    case NormFamily::product_ba: return product_norm(f, spec.s, spec.delta, true);
    case NormFamily::mixed: return mixed_norm(f, spec.s, spec.delta);
    case NormFamily::hyperbolic: return hyperbolic_norm(f, spec.s, spec.delta);
    case NormFamily::besov_s22:
      if (p == nullptr) throw ConfigError("Besov norm requires a dyadic partition");
      return besov_norm(f, spec.s, spec.delta, *p);
  }
  return 0.0;
}

}  // namespace sgwe
