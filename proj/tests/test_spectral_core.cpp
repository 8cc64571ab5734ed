#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sgwe/cutoff.hpp"
#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/spectral.hpp"

using namespace sgwe;
using std::numbers::pi;

TEST_CASE("grid geometry and validation") {
  const Grid2 g(16.0, 64);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.coord(0) == -16.0);
  CHECK(g.coord(g.mirror(5)) == doctest::Approx(-g.coord(5)));
  CHECK(g.mirror(0) == 0);
  CHECK(g.mode(31) == 31);
  CHECK(g.mode(32) == -32);
  CHECK_THROWS_AS(Grid2(16.0, 96), ConfigError);
  CHECK_THROWS_AS(Grid2(-1.0, 64), ConfigError);
  CHECK_THROWS_AS(Grid2(4.0, 64).require_cutoff_margin(), ConfigError);
  CHECK_NOTHROW(Grid2(8.0, 64).require_cutoff_margin());
}

TEST_CASE("field arithmetic keeps frame and rejects mismatches") {
  const Grid2 g(8.0, 16);
  Field2 a = Field2::sample(g, Frame::null, [](double x, double y) { return x + y; });
  const Field2 b = a.zeros_like();
  CHECK((a - b).frame() == Frame::null);
  CHECK(max_diff(a + b, a) == 0.0);
  CHECK_THROWS_AS(a += Field2(g, Frame::cartesian), ConfigError);
  CHECK_THROWS_AS(a += Field2(Grid2(8.0, 32), Frame::null), ConfigError);
}

TEST_CASE("dft2 of a constant has only the zero mode") {
  const Grid2 g(8.0, 32);
  const Spectrum2 s = dft2(Field2::sample(g, Frame::null, [](double, double) { return 2.5; }));
  for (int m = -16; m < 16; ++m)
    for (int n = -16; n < 16; ++n) {
      const double expect = (m == 0 && n == 0) ? 2.5 : 0.0;
      CHECK(std::abs(s.mode(0, m, n) - expect) < 1e-12);
    }
}

TEST_CASE("dft2 of a single mode is a unit mass") {
  const Grid2 g(8.0, 32);
  const int m0 = 3, n0 = -5;
  Field2 f(g, Frame::null);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      f.at(0, i, j) = std::exp(cplx(0.0, g.frequency((m0 + 32) % 32) * g.coord(i) +
                                             g.frequency((n0 + 32) % 32) * g.coord(j)));
  const Spectrum2 s = dft2(f);
  for (int m = -16; m < 16; ++m)
    for (int n = -16; n < 16; ++n)
      CHECK(std::abs(s.mode(0, m, n) - ((m == m0 && n == n0) ? 1.0 : 0.0)) < 1e-12);
}

TEST_CASE("random real field round-trips") {
  const Grid2 g(16.0, 64);
  const Field2 f = random_band_limited(g, Frame::null, Arity::vector2, 11, 20);
  const Field2 back = idft2(dft2(f));
  CHECK(max_diff(back, f) <= 1e-10 * f.max_abs());
  CHECK(back.max_imag() <= 1e-12);
}

TEST_CASE("idft2 of the zero mode is constant and Hermitian spectra give real fields") {
  const Grid2 g(8.0, 16);
  Spectrum2 s(g, Frame::null, Arity::scalar);
  s.mode(0, 0, 0) = 1.0;
  const Field2 one = idft2(s);
  CHECK(max_diff(one, Field2::sample(g, Frame::null, [](double, double) { return 1.0; })) < 1e-14);
  s.mode(0, 2, -3) = cplx(0.3, 0.7);
  s.mode(0, -2, 3) = cplx(0.3, -0.7);
  CHECK(idft2(s).max_imag() <= 1e-12);
}

TEST_CASE("Gaussian bump has the analytic Fourier coefficients") {
  const double big_l = 16.0, w = 1.0;
  const Grid2 g(big_l, 128);
  const Spectrum2 s =
      dft2(Field2::sample(g, Frame::null, [&](double a, double b) { return std::exp(-(a * a + b * b) / (2 * w * w)); }));
  double err = 0.0;
  for (int m = -64; m < 64; ++m)
    for (int n = -64; n < 64; ++n) {
      const double tau = pi * m / big_l, xi = pi * n / big_l;
      const double exact = 2 * pi * w * w / (4 * big_l * big_l) * std::exp(-w * w * (tau * tau + xi * xi) / 2);
      err = std::max(err, std::abs(s.mode(0, m, n) - exact));
    }
  CHECK(err <= 1e-8);
}

TEST_CASE("spectral derivative of a single sine mode") {
  const double big_l = 8.0;
  const Grid2 g(big_l, 32);
  const Field2 f = Field2::sample(g, Frame::null, [&](double a, double) { return std::sin(pi * a / big_l); });
  const Field2 exact =
      Field2::sample(g, Frame::null, [&](double a, double) { return pi / big_l * std::cos(pi * a / big_l); });
  CHECK(max_diff(spectral_derivative(f, Axis::first), exact) <= 1e-10);
  CHECK(spectral_derivative(f, Axis::second).max_abs() <= 1e-12);
  CHECK(spectral_derivative(Field2::sample(g, Frame::null, [](double, double) { return 4.0; }), Axis::first).max_abs() <=
        1e-12);
}

TEST_CASE("spectral derivative of the cutoff matches centered differences") {
  std::vector<double> errs;
  for (int n : {256, 512}) {
    const Grid2 g(16.0, n);
    const double dx = g.spacing();
    const Field2 eta = Field2::sample(g, Frame::null, [](double a, double) { return CutoffPair::eta(a); });
    const Field2 d = spectral_derivative(eta, Axis::first);
    double err = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
      const double fd = (CutoffPair::eta(g.coord(i + 1)) - CutoffPair::eta(g.coord(i - 1))) / (2 * dx);
      err = std::max(err, std::abs(d.at(0, i, 0).real() - fd));
    }
    CHECK(err <= 10.0 * dx * dx);
    errs.push_back(err);
  }
  // The gap is the finite-difference truncation; near 4x per halving once resolved.
  CHECK(errs[0] / errs[1] >= 3.0);
}

TEST_CASE("tensor evaluation reproduces grid values and interpolates a mode") {
  const Grid2 g(8.0, 32);
  const Field2 f = Field2::sample(g, Frame::null, [](double a, double b) {
    return std::cos(pi * a / 8.0) * std::sin(2 * pi * b / 8.0);
  });
  const std::vector<double> xs = {0.1234, -3.3}, ys = {2.2, 7.9};
  const auto v = evaluate_tensor(dft2(f), 0, xs, ys);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q)
      CHECK(std::abs(v[p * 2 + q].real() - std::cos(pi * xs[p] / 8.0) * std::sin(2 * pi * ys[q] / 8.0)) < 1e-12);
  std::vector<double> line(32);
  for (int i = 0; i < 32; ++i) line[i] = std::sin(pi * g.coord(i) / 8.0);
  const std::vector<double> at = {0.37};
  CHECK(interpolate_periodic(line, 8.0, at)[0] == doctest::Approx(std::sin(pi * 0.37 / 8.0)).epsilon(1e-12));
}
