#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"

using namespace sgwe;
using std::numbers::pi;

namespace {

// On half-width 4 pi the frequency of mode m is m / 4, so mode 4 * 2^j sits
// exactly where phi_j equals one.
const double kL = 4.0 * pi;

Field2 plane_wave(const Grid2& g, int m, int n) {
  Field2 f(g, Frame::null);
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      f.at(0, i, j) = std::exp(cplx(0.0, pi * (m * g.coord(i) + n * g.coord(j)) / g.half_width()));
  return f;
}

double bracket(double x) { return std::sqrt(1.0 + x * x); }

}  // namespace

TEST_CASE("partition point values") {
  CHECK(DyadicPartition::phi(0, 0.0) == 1.0);
  CHECK(DyadicPartition::phi(3, 3.0) == 0.0);
  CHECK(DyadicPartition::phi(2, 4.0) == 1.0);
  CHECK(DyadicPartition::phi(-1, 0.0) == 0.0);
  CHECK(bump_profile(0.5) == 1.0);
  CHECK(bump_profile(2.5) == 0.0);
}

TEST_CASE("partition axioms hold on several grids") {
  for (int n : {64, 256, 1024}) {
    const PartitionAxioms ax = check_partition_axioms(DyadicPartition(Grid2(16.0, n)));
    CHECK(ax.max_sum_error <= 1e-12);
    CHECK(ax.max_outside_support <= 1e-14);
    REQUIRE(ax.derivative_sup.size() >= 3);
    for (std::size_t j = 1; j < ax.derivative_sup.size(); ++j)
      CHECK(ax.derivative_sup[j] == doctest::Approx(ax.derivative_sup[1]).epsilon(1e-3));
  }
  CHECK_THROWS_AS(DyadicPartition(Grid2(16.0, 4)), ConfigError);
}

TEST_CASE("a mode where the partition equals one lives in a single block") {
  const Grid2 g(kL, 256);
  const DyadicPartition p(g);
  const Field2 f = plane_wave(g, 16, 8);  // frequencies (4, 2): shells (2, 1)
  CHECK(max_diff(lp_block(f, 2, 1, p), f) <= 1e-12);
  for (int j = 0; j <= p.max_index(); ++j)
    for (int k = 0; k <= p.max_index(); ++k)
      if (j != 2 || k != 1) CHECK(lp_block(f, j, k, p).max_abs() <= 1e-12);
  CHECK(lp_block(f, -1, 0, p).max_abs() == 0.0);
  CHECK(lp_block(f.zeros_like(), 2, 1, p).max_abs() == 0.0);
}

TEST_CASE("blocks resum to the field") {
  const Grid2 g(16.0, 128);
  const DyadicPartition p(g);
  const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, 3, 40);
  Field2 sum = f.zeros_like();
  for (int j = 0; j <= p.max_index(); ++j)
    for (int k = 0; k <= p.max_index(); ++k) sum += lp_block(f, j, k, p);
  CHECK(max_diff(sum, f) <= 1e-10 * f.max_abs());
}

TEST_CASE("product norm of a single mode and the L2 reduction") {
  const Grid2 g(kL, 64);
  const Field2 f = plane_wave(g, 3, -5);
  const double s = 0.8, d = 0.7;
  CHECK(product_norm(f, s, d) ==
        doctest::Approx(std::pow(bracket(0.75), s) * std::pow(bracket(1.25), d) * 2 * kL).epsilon(1e-12));
  CHECK(product_norm(f, s, d, true) ==
        doctest::Approx(std::pow(bracket(1.25), s) * std::pow(bracket(0.75), d) * 2 * kL).epsilon(1e-12));
  const Field2 r = random_band_limited(Grid2(16.0, 64), Frame::null, Arity::vector2, 5, 12);
  CHECK(product_norm(r, 0.0, 0.0) == doctest::Approx(r.l2_norm()).epsilon(1e-10));
  CHECK(hyperbolic_norm(r, 0.0, 0.0) == doctest::Approx(r.l2_norm()).epsilon(1e-10));
  CHECK(product_norm(r.zeros_like(), s, d) == 0.0);
  CHECK(mixed_norm(r.zeros_like(), s, d) == 0.0);
  CHECK(hyperbolic_norm(r.zeros_like(), s, d) == 0.0);
}

TEST_CASE("mixed norm: symmetric fields and monotonicity") {
  const Grid2 g(16.0, 64);
  const Field2 sym = Field2::sample(g, Frame::null, [](double a, double b) {
    return std::exp(-(a * a + b * b) / 4.0) * (1.0 + std::cos(a) * std::cos(b));
  });
  CHECK(mixed_norm(sym, 0.8, 0.6) == doctest::Approx(std::sqrt(2.0) * product_norm(sym, 0.8, 0.6)).epsilon(1e-12));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, seed, 16);
    const double m = mixed_norm(f, 0.8, 0.6);
    CHECK(m >= product_norm(f, 0.8, 0.6));
    CHECK(m >= product_norm(f, 0.8, 0.6, true));
  }
}

TEST_CASE("hyperbolic weight on a null-cone mode sees only the s-weight") {
  const Grid2 g(kL, 64);
  const double c = 1.5;  // mode 6 on both axes
  const Field2 f = plane_wave(g, 6, 6);
  CHECK(hyperbolic_norm(f, 0.8, 0.6) == doctest::Approx(std::pow(bracket(2 * c), 0.8) * 2 * kL).epsilon(1e-12));
}

TEST_CASE("Besov norm of a single-block field") {
  const Grid2 g(kL, 256);
  const DyadicPartition p(g);
  const Field2 f = plane_wave(g, 16, 8);
  const double s1 = 0.8, s2 = 0.6;
  CHECK(besov_norm(f, s1, s2, p) == doctest::Approx(std::pow(2.0, s1 * 2 + s2 * 1) * f.l2_norm()).epsilon(1e-12));
  CHECK(besov_norm(f.zeros_like(), s1, s2, p) == 0.0);
}

TEST_CASE("Besov and product norms are equivalent on a band-limited ensemble") {
  const Grid2 g(16.0, 128);
  const DyadicPartition p(g);
  double lo = INFINITY, hi = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, derive_seed(99, seed), 24);
    const double r = besov_norm(f, 0.8, 0.8, p) / product_norm(f, 0.8, 0.8);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  CHECK(lo >= 1.0 / 1.25);
  CHECK(hi <= 1.25);
}

TEST_CASE("norm dispatcher") {
  const Grid2 g(16.0, 64);
  const DyadicPartition p(g);
  const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, 8, 10);
  CHECK(norm(f, {0.8, 0.7, NormFamily::mixed}) == mixed_norm(f, 0.8, 0.7));
  CHECK(norm(f, {0.8, 0.7, NormFamily::product_ba}) == product_norm(f, 0.8, 0.7, true));
  CHECK(norm(f, {0.8, 0.7, NormFamily::besov_s22}, &p) == besov_norm(f, 0.8, 0.7, p));
  CHECK_THROWS_AS(norm(f, {0.8, 0.7, NormFamily::besov_s22}), ConfigError);
}
