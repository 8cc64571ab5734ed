#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sgwe/cutoff.hpp"
#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/wave_ops.hpp"

using namespace sgwe;

namespace {

double window_sup(const Field2& f, double w) {
  const Grid2& g = f.grid();
  double m = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j)
        if (std::abs(g.coord(i)) <= w && std::abs(g.coord(j)) <= w) m = std::max(m, std::abs(f.at(c, i, j)));
  return m;
}

Field2 constant(const Grid2& g, double v) {
  return Field2::sample(g, Frame::null, [v](double, double) { return v; });
}

}  // namespace

TEST_CASE("cumulative integral is sixth order and falls back on short input") {
  std::vector<double> errs;
  for (int n : {32, 64, 128}) {
    const double dx = 2.0 / n;
    std::vector<cplx> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = std::cos(3.0 * i * dx);
    const auto c = cumulative_integral(g, dx);
    CHECK(c[0] == cplx(0.0));
    double e = 0.0;
    for (int i = 0; i <= n; ++i) e = std::max(e, std::abs(c[i].real() - std::sin(3.0 * i * dx) / 3.0));
    errs.push_back(e);
  }
  CHECK(std::log2(errs[1] / errs[2]) >= 5.5);
  const std::vector<cplx> shortg = {1.0, 3.0, 5.0};
  const auto c = cumulative_integral(shortg, 0.5);
  CHECK(c[1].real() == doctest::Approx(1.0));
  CHECK(c[2].real() == doctest::Approx(3.0));
}

TEST_CASE("homogeneous solution closed forms") {
  const Grid2 g(8.0, 64);
  const int n = g.size();
  InitialData d = InitialData::zeros(8.0, n);
  for (int i = 0; i < n; ++i) d.u0[0][i] = 1.5;
  Field2 s = homogeneous_solution(d, g);
  CHECK(max_diff(s, Field2::sample2(g, Frame::null, [](double, double) { return 1.5; },
                                    [](double, double) { return 0.0; })) <= 1e-14);

  d = InitialData::zeros(8.0, n);
  for (int i = 0; i < n; ++i) d.u1[1][i] = 1.0;
  s = homogeneous_solution(d, g);
  double e = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != 0) e = std::max(e, std::abs(s.at(1, i, j).real() - 0.5 * (g.coord(i) + g.coord(j))));
  CHECK(e <= 1e-12);

  d = InitialData::sample(8.0, n, [](double x) { return std::array<double, 2>{x * x, 0.0}; },
                          [](double) { return std::array<double, 2>{0.0, 0.0}; });
  s = homogeneous_solution(d, g);
  for (int i = 1; i < n; ++i) {
    CHECK(s.at(0, i, 5).real() == doctest::Approx(0.5 * (g.coord(i) * g.coord(i) + g.coord(5) * g.coord(5))));
    CHECK(s.at(0, i, g.mirror(i)).real() == doctest::Approx(g.coord(i) * g.coord(i)));
  }
  CHECK_THROWS_AS(homogeneous_solution(InitialData::zeros(8.0, 32), g), ConfigError);
}

TEST_CASE("quadrature route: zero, constant and linear sources") {
  const Grid2 g(16.0, 256);
  const double dx = g.spacing();
  CHECK(dalembert_inverse_quadrature(constant(g, 0.0)).max_abs() == 0.0);

  const Field2 f1 = dalembert_inverse_quadrature(constant(g, 1.0));
  const Field2 exact = Field2::sample(g, Frame::null, [](double a, double b) { return (a + b) * (a + b) / 8.0; });
  CHECK(max_diff(f1, exact) <= dx * dx * exact.max_abs());
  CHECK(window_sup(box_operator(f1) - constant(g, 1.0), 4.0) <= dx * dx);
  // Index 0 pairs -L with its periodic image, not with +L, so it is skipped.
  for (int i = 1; i < g.size(); ++i) CHECK(f1.at(0, i, g.mirror(i)) == cplx(0.0));

  const Field2 lin = Field2::sample(g, Frame::null, [](double a, double b) { return a + b; });
  CHECK(window_sup(box_operator(dalembert_inverse_quadrature(lin)) - lin, 4.0) <= dx * dx);
}

TEST_CASE("LP route: zero source, route agreement and a pure high mode") {
  {
    const Grid2 g(16.0, 256);
    const DyadicPartition p(g);
    CHECK(dalembert_inverse_lp(constant(g, 0.0), p).max_abs() == 0.0);
    const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, 12, 10);
    const Field2 q = localize(dalembert_inverse_quadrature(f), 2.0);
    const Field2 l = localize(dalembert_inverse_lp(f, p), 2.0);
    CHECK(max_diff(q, l) <= 1e-6 * q.max_abs());
  }
  {
    // Frequency 4 on both axes is where phi_2 equals one, so only the
    // doubly-high block is active; N = 1024 resolves the window to 1e-8.
    const Grid2 g(8.0 * std::numbers::pi, 1024);
    const DyadicPartition p(g);
    const Field2 f = Field2::sample(g, Frame::null, [](double a, double b) { return std::cos(4 * a) * std::cos(4 * b); });
    CHECK(window_sup(box_operator(dalembert_inverse_lp(f, p)) - f, 4.0) <= 1e-8);
  }
}

TEST_CASE("stochastic convolution identities") {
  const Grid2 g(16.0, 64);
  const double dx = g.spacing();
  const FbsSample s = sample_sheet(g, {0.85, 0.85}, 3);
  const Field2 u = random_smooth_field(g, Frame::null, Arity::vector2, 8, 0.3);
  CHECK(stochastic_convolution(u, DiffusionCoeff::zero(), s).max_abs() == 0.0);

  // sigma = 1: the mixed difference of the sum telescopes to one cell increment.
  DiffusionCoeff one;
  one.offset = {1.0, 1.0};
  const Field2 f = stochastic_convolution(u, one, s);
  double e = 0.0;
  for (int i = 8; i < 56; ++i)
    for (int j = 8; j < 56; ++j) {
      const cplx mixed = f.at(0, i + 1, j + 1) - f.at(0, i + 1, j) - f.at(0, i, j + 1) + f.at(0, i, j);
      e = std::max(e, std::abs(4.0 * mixed / (dx * dx) - s.derivative.at(0, i, j)));
    }
  CHECK(e <= 1e-10);

  // Deterministic sheet alpha * beta: every increment is dx^2, so the sum is
  // the quadrature of f = 1 up to O(dx).
  for (int n : {64, 128}) {
    const Grid2 gn(16.0, n);
    const Field2 sheet = Field2::sample(gn, Frame::null, [](double a, double b) { return a * b; });
    const FbsSample det{sheet, increment_field(sheet), 0, {0.85, 0.85}};
    const Field2 zero(gn, Frame::null, Arity::vector2);
    const Field2 got = stochastic_convolution(zero, one, det);
    const Field2 want = dalembert_inverse_quadrature(constant(gn, 1.0));
    CHECK(window_sup(got - Field2::sample2(gn, Frame::null, [&](double a, double b) { return (a + b) * (a + b) / 8.0; },
                                           [&](double a, double b) { return (a + b) * (a + b) / 8.0; }),
                     4.0) <= 4.0 * gn.spacing());
    CHECK(window_sup(want - Field2::sample(gn, Frame::null, [](double a, double b) { return (a + b) * (a + b) / 8.0; }),
                     4.0) <= 1e-10);
  }

  FbsSample rough = s;
  rough.hurst = {0.5, 0.85};
  CHECK_THROWS_AS(stochastic_convolution(u, one, rough), RegimeError);
}

TEST_CASE("inverse estimate report") {
  const Grid2 g(16.0, 128);
  const DyadicPartition p(g);
  std::vector<Field2> fs = {constant(g, 0.0)};
  for (int k = 0; k < 5; ++k) fs.push_back(random_band_limited(g, Frame::null, Arity::scalar, derive_seed(2, k), 24));
  const InverseEstimateReport rep = inverse_estimate_check(fs, 0.8, 0.8, 2.0, p);
  CHECK(rep.skipped == 1);
  CHECK(rep.ratios.size() == 5);
  CHECK(std::isfinite(rep.max_ratio));
  CHECK(rep.max_ratio > 0.0);
  CHECK(box_operator(constant(g, 0.0)).max_abs() == 0.0);
}
