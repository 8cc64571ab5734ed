#include <doctest.h>

#include <cmath>

#include "sgwe/config.hpp"
#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/solver.hpp"

using namespace sgwe;

namespace {

SolverConfig small_config() {
  SolverConfig c;
  c.grid = Grid2(8.0, 128);
  c.seed = 5;
  return c;
}

InitialData data(const Grid2& g, double amp0, double amp1) {
  return InitialData::sample(g.half_width(), g.size(),
                             [=](double x) { return std::array<double, 2>{amp0 * std::exp(-x * x / 2), 0.0}; },
                             [=](double x) { return std::array<double, 2>{0.0, amp1 * x * std::exp(-x * x / 2)}; });
}

DiffusionCoeff small_sigma() {
  DiffusionCoeff s;
  s.kind = SigmaKind::sin_cos;
  s.scale = 0.1;
  return s;
}

}  // namespace

TEST_CASE("solver config validation") {
  SolverConfig c = small_config();
  CHECK_NOTHROW(c.validate());
  c.s = 0.7;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.hurst = {0.75, 0.85};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.lambda = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = small_config();
  c.grid = Grid2(4.0, 64);
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("scale_data: constants, velocity scaling and odd data") {
  const Grid2 g(8.0, 128);
  const int n = g.size();
  InitialData d = InitialData::sample(8.0, n, [](double) { return std::array<double, 2>{2.0, -1.0}; },
                                      [](double) { return std::array<double, 2>{1.0, 0.0}; });
  const ScaledData s = scale_data(d, 4.0, g);
  CHECK(s.mean[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(s.mean[1] == doctest::Approx(-1.0).epsilon(1e-12));
  for (int i = 0; i < n; ++i) {
    CHECK(std::abs(s.data.u0[0][i]) <= 1e-12);
    CHECK(s.data.u1[0][i] == doctest::Approx(CutoffPair::chi(g.coord(i)) / 4.0).epsilon(1e-12));
  }

  const InitialData odd = InitialData::sample(8.0, n, [](double x) { return std::array<double, 2>{std::sin(x), 0.0}; },
                                              [](double) { return std::array<double, 2>{0.0, 0.0}; });
  const ScaledData o = scale_data(odd, 1.0, g);
  CHECK(std::abs(o.mean[0]) <= 1e-12);
  for (int i = 0; i < n; ++i)
    CHECK(o.data.u0[0][i] == doctest::Approx(CutoffPair::chi(g.coord(i)) * std::sin(g.coord(i))).epsilon(1e-9));
  CHECK_THROWS_AS(scale_data(d, 0.5, g), ConfigError);
}

TEST_CASE("scale_noise: identity, dilation of a linear sheet, zero sheet and window errors") {
  const Grid2 g(8.0, 64);
  const FbsSample s = sample_sheet(g, {0.85, 0.85}, 9);
  CHECK(max_diff(scale_noise(s, 1.0, g).sheet, s.sheet) == 0.0);

  const Field2 lin = Field2::sample(g, Frame::null, [](double a, double b) { return 3.0 * a * b; });
  const FbsSample det{lin, increment_field(lin), 0, {0.85, 0.85}};
  const FbsSample half = scale_noise(det, 2.0, g);
  for (int i = 10; i < 50; ++i)
    for (int j = 10; j < 50; ++j) CHECK(half.derivative.at(0, i, j).real() == doctest::Approx(3.0 / 4.0));

  const Field2 zero(g, Frame::null);
  CHECK(scale_noise(FbsSample{zero, zero, 0, {0.85, 0.85}}, 2.0, g).sheet.max_abs() == 0.0);
  CHECK_THROWS_AS(scale_noise(s, 0.5, g), DomainError);
}

TEST_CASE("theta map in the linear case") {
  SolverConfig cfg = small_config();
  const Grid2& g = cfg.grid;
  const NoiseSource noise = default_noise(cfg);
  const Field2 u(g, Frame::null, Arity::vector2);

  const MildProblem zero = scaled_problem(cfg, 1.0, InitialData::zeros(8.0, g.size()), noise, {}, DiffusionCoeff::zero());
  CHECK(theta_map(u, zero).max_abs() == 0.0);

  // u0 = 0, u1 = 1 on the first component at lambda = 1.
  const InitialData d = InitialData::sample(8.0, g.size(), [](double) { return std::array<double, 2>{0.0, 0.0}; },
                                            [](double) { return std::array<double, 2>{1.0, 0.0}; });
  const MildProblem p = scaled_problem(cfg, 1.0, d, noise, {}, DiffusionCoeff::zero());
  const Field2 th = theta_map(u, p);
  // Oracle: (1/2) int_{-beta}^{alpha} chi, cut off by eta(alpha) eta(beta).
  for (int i = 40; i < 90; i += 7)
    for (int j = 40; j < 90; j += 5) {
      const double a = g.coord(i), b = g.coord(j);
      double integral = 0.0;
      const int m = 4000;
      for (int k = 0; k < m; ++k) {
        const double x = -b + (a + b) * (k + 0.5) / m;
        integral += CutoffPair::chi(x) * (a + b) / m;
      }
      const double want = CutoffPair::eta(a) * CutoffPair::eta(b) * 0.5 * integral;
      // The grid integrates chi's transition at dx = 1/8, worth a few 1e-6.
      CHECK(std::abs(th.at(0, i, j).real() - want) <= 5e-5);
    }
}

TEST_CASE("Picard iteration: trivial and linear cases") {
  SolverConfig cfg = small_config();
  const Grid2& g = cfg.grid;
  const NoiseSource noise = default_noise(cfg);
  const MildProblem zero = scaled_problem(cfg, 1.0, InitialData::zeros(8.0, g.size()), noise, {}, DiffusionCoeff::zero());
  const PicardState z = picard_solve(cfg, zero);
  CHECK(z.converged);
  CHECK(z.iterations == 1);
  CHECK(z.iterate.max_abs() == 0.0);

  const InitialData d = data(g, 0.1, 0.05);
  const MildProblem lin = scaled_problem(cfg, 1.0, d, noise, {}, DiffusionCoeff::zero());
  const PicardState st = picard_solve(cfg, lin);
  CHECK(st.converged);
  CHECK(st.iterations == 2);
  CHECK(st.last_increment == 0.0);
  CHECK(residual(st.iterate, cfg, lin) <= g.spacing() * g.spacing());
  // The zero field is not a solution. Theta is constant here, so its defect
  // is the norm of the localized homogeneous part, the same as that of 2 u*.
  const double r0 = residual(Field2(g, Frame::null, Arity::vector2), cfg, lin);
  CHECK(r0 > 0.0);
  CHECK(r0 == doctest::Approx(residual(2.0 * st.iterate, cfg, lin)).epsilon(1e-12));
  CHECK(choose_lambda(cfg, d, noise, {}, DiffusionCoeff::zero()).lambda == 1.0);
}

TEST_CASE("nonlinear solve contracts and its fixed point certifies itself") {
  SolverConfig cfg = small_config();
  const InitialData d = data(cfg.grid, 0.1, 0.05);
  const ChristoffelTable table = random_christoffel(0.1, 2, 7);
  const NoiseSource noise = default_noise(cfg);
  const LambdaChoice ch = choose_lambda(cfg, d, noise, table, small_sigma());
  CHECK(ch.probed.back() == ch.lambda);
  const MildProblem p = scaled_problem(cfg, ch.lambda, d, noise, table, small_sigma());
  const PicardState st = picard_solve(cfg, p);
  CHECK(st.converged);
  CHECK(st.max_factor <= 0.5);
  CHECK(residual(st.iterate, cfg, p) <= 2 * cfg.picard_tol);
  CHECK(st.trace.size() == static_cast<std::size_t>(st.iterations));

  // Rescaled problem in original coordinates sees the same fixed point.
  const MildProblem rp = rescaled_problem(p, d, noise, table, small_sigma());
  CHECK(residual(rescale_solution(st.iterate, ch.lambda), cfg, rp) <= 10 * cfg.picard_tol);
}

TEST_CASE("returned lambda is nondecreasing in the data amplitude") {
  SolverConfig cfg = small_config();
  const ChristoffelTable table = random_christoffel(0.3, 2, 7);
  const NoiseSource noise = default_noise(cfg);
  double prev = 1.0;
  for (double amp : {0.05, 0.2, 0.6}) {
    const double lam = choose_lambda(cfg, data(cfg.grid, amp, 0.5 * amp), noise, table, small_sigma()).lambda;
    CHECK(lam >= prev);
    prev = lam;
  }
}

TEST_CASE("rescale_solution") {
  const Grid2 g(8.0, 64);
  const Field2 u = Field2::sample2(g, Frame::null, [](double a, double b) { return a + b; },
                                   [](double a, double) { return a; });
  CHECK(max_diff(rescale_solution(u, 1.0), u) == 0.0);
  const Field2 r = rescale_solution(u, 2.0);
  CHECK(r.grid().half_width() == 4.0);
  for (int i = 0; i < 64; i += 9)
    for (int j = 0; j < 64; j += 7)
      CHECK(r.at(0, i, j).real() == doctest::Approx(2.0 * (r.grid().coord(i) + r.grid().coord(j))));
  CHECK(rescale_solution(u.zeros_like(), 2.0).max_abs() == 0.0);
  CHECK_THROWS_AS(rescale_solution(u, 2.0, Grid2(8.0, 64)), DomainError);
}

TEST_CASE("gluing: single center and the linear case") {
  SolverConfig cfg = small_config();
  const InitialData d = data(cfg.grid, 0.1, 0.05);
  const GlueReport one = glue_solutions({0.0}, cfg, d, {}, DiffusionCoeff::zero());
  CHECK(one.success);
  CHECK(one.pair_disagreement.empty());

  const GlueReport two = glue_solutions({-0.25, 0.25}, cfg, d, {}, DiffusionCoeff::zero(), 1e-5, 2.0);
  const double dx = cfg.grid.spacing() / two.lambda;
  CHECK(two.lambda == 2.0);
  REQUIRE(two.pair_points.size() == 1);
  CHECK(two.pair_points[0] > 0);
  CHECK(two.max_disagreement <= dx * dx);
}
