#include <doctest.h>

#include <cmath>

#include "sgwe/cutoff.hpp"
#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/fbs.hpp"

using namespace sgwe;

namespace {

double eta(double x) { return CutoffPair::eta(x); }

}  // namespace

TEST_CASE("covariance kernel closed forms") {
  CHECK(covariance_R(0.7, 1.3, 1.3) == doctest::Approx(std::pow(1.3, 1.4)));
  CHECK(covariance_R(0.5, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK(covariance_R(0.5, 3.0, 0.25) == doctest::Approx(0.25));
  CHECK(covariance_R(0.85, 0.0, 2.0) == 0.0);
}

TEST_CASE("Hurst validation") {
  CHECK_THROWS_AS((HurstPair{1.2, 0.8}.validate()), ConfigError);
  CHECK_THROWS_AS((HurstPair{0.0, 0.8}.validate()), ConfigError);
  CHECK_THROWS_AS((HurstPair{0.85, 0.7}.require_above(0.8)), ConfigError);
  CHECK_NOTHROW((HurstPair{0.85, 0.85}.require_above(0.8)));
  CHECK_THROWS_AS(FbsSampler(Grid2(4.0, 32), HurstPair{1.5, 0.5}), ConfigError);
}

TEST_CASE("axis factors reproduce the axis covariance") {
  const Grid2 g(4.0, 32);
  const FbsSampler s(g, {0.85, 0.6});
  const Eigen::MatrixXd c1 = FbsSampler::axis_covariance(g, 0.85);
  const Eigen::MatrixXd c2 = FbsSampler::axis_covariance(g, 0.6);
  CHECK((s.factor(0) * s.factor(0).transpose() - c1).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((s.factor(1) * s.factor(1).transpose() - c2).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c1(0, 0) == doctest::Approx(std::pow(g.spacing(), 1.7)));
}

TEST_CASE("sheet is deterministic, even and zero on the axes") {
  const Grid2 g(4.0, 64);
  const FbsSample a = sample_sheet(g, {0.85, 0.8}, 42);
  const FbsSample b = sample_sheet(g, {0.85, 0.8}, 42);
  CHECK(max_diff(a.sheet, b.sheet) == 0.0);
  CHECK(max_diff(a.sheet, sample_sheet(g, {0.85, 0.8}, 43).sheet) > 0.0);
  const int zero = g.size() / 2;
  for (int i = 0; i < g.size(); ++i) {
    CHECK(a.sheet.at(0, zero, i) == 0.0);
    CHECK(a.sheet.at(0, i, zero) == 0.0);
    for (int j = 0; j < g.size(); ++j) {
      CHECK(a.sheet.at(0, g.mirror(i), j) == a.sheet.at(0, i, j));
      CHECK(a.sheet.at(0, i, g.mirror(j)) == a.sheet.at(0, i, j));
    }
  }
  CHECK(a.sheet.max_imag() == 0.0);
}

TEST_CASE("increment field and coarsening are consistent with the sheet") {
  const Grid2 g(4.0, 64);
  const FbsSample s = sample_sheet(g, {0.85, 0.85}, 7);
  const double dx = g.spacing();
  const int i = 40, j = 37;
  const double inc = (s.sheet.at(0, i + 1, j + 1) - s.sheet.at(0, i + 1, j) - s.sheet.at(0, i, j + 1) +
                      s.sheet.at(0, i, j)).real();
  CHECK(s.derivative.at(0, i, j).real() == doctest::Approx(inc / (dx * dx)).epsilon(1e-12));
  CHECK(rect_increment(s, g.coord(i), g.coord(i + 1), g.coord(j), g.coord(j + 1)) ==
        doctest::Approx(inc).epsilon(1e-12));
  CHECK(rect_increment(s, 0.5, 0.5, -1.0, 2.0) == 0.0);
  CHECK_THROWS_AS(rect_increment(s, 0.51, 1.0, 0.0, 1.0), DomainError);

  const FbsSample c = s.coarsened();
  CHECK(c.grid().size() == 32);
  for (int p = 0; p < 32; ++p)
    for (int q = 0; q < 32; ++q) CHECK(c.sheet.at(0, p, q) == s.sheet.at(0, 2 * p, 2 * q));
}

TEST_CASE("rectangle variances match the closed forms") {
  const int reps = 2000;
  auto check = [&](HurstPair h, double a1, double a2, double b1, double b2, double target) {
    const FbsSampler s(Grid2(4.0, 32), h);
    std::vector<double> inc(reps);
    for (int k = 0; k < reps; ++k) inc[k] = rect_increment(s.sample(derive_seed(17, k)), a1, a2, b1, b2);
    const double var = rect_increment_variance(inc);
    // The sample variance of Gaussian data has standard error var * sqrt(2 / (n - 1)).
    const double se = target * std::sqrt(2.0 / (reps - 1));
    CHECK(std::abs(var - target) <= 5 * se);
  };
  check({0.5, 0.5}, 0.0, 2.0, 0.0, 3.0, 6.0);
  check({0.85, 0.80}, 0.0, 1.0, 0.0, 1.0, 1.0);
  std::vector<double> zeros(200, 0.0);
  CHECK(rect_increment_variance(zeros) == 0.0);
  CHECK_THROWS_AS(rect_increment_variance(std::vector<double>(10, 1.0)), ConfigError);
}

TEST_CASE("standardized marginals pass a Gaussian moment check") {
  const FbsSampler s(Grid2(4.0, 32), {0.85, 0.8});
  const int reps = 2000;
  // Slot (7, 11) of the quadrant is the point (8 dx, 12 dx).
  std::vector<double> v(reps);
  for (int k = 0; k < reps; ++k) v[k] = s.quadrant(derive_seed(23, k))(7, 11);
  const double sd = std::sqrt(covariance_R(0.85, 8 * 0.25, 8 * 0.25) * covariance_R(0.8, 12 * 0.25, 12 * 0.25));
  double m3 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double z = x / sd;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  m3 /= reps;
  m4 /= reps;
  CHECK(std::abs(m3) <= 0.1);
  CHECK(std::abs(m4 - 3.0) <= 0.2);
}

TEST_CASE("regularity norm: zero sheet, refinement stability and a divergence witness") {
  const FbsSampler sampler(Grid2(16.0, 64), {0.85, 0.85});
  const FbsSample zero = sampler.sample_from_normals(Eigen::MatrixXd::Zero(32, 32));
  CHECK(regularity_check(zero, 0.5, 0.5, eta) == 0.0);
  CHECK_THROWS_AS(regularity_check(zero, 0.95, 0.5, eta), ConfigError);

  const FbsSample fine = sample_sheet(Grid2(16.0, 512), {0.85, 0.85}, 1);
  const FbsSample coarse = fine.coarsened();
  auto ratio = [&](double h) { return regularity_norm(fine, h, h, eta) / regularity_norm(coarse, h, h, eta); };
  const double below = ratio(0.5), above = ratio(0.95), far = ratio(2.0);
  CHECK(below <= 1.5);
  CHECK(below >= 1.0 / 1.5);
  // Above the Hurst index the norm grows under refinement; one halving of dx
  // doubles it only once h' is well above H.
  CHECK(above > below);
  CHECK(far >= 2.0);
}
