#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sgwe/cutoff.hpp"
#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/geometry.hpp"

using namespace sgwe;

TEST_CASE("flat and single-entry tables") {
  const ChristoffelTable flat;
  CHECK(flat.flat());
  const auto z = flat.evaluate(1.0, 2.0);
  for (const auto& k : z)
    for (const auto& a : k)
      for (double v : a) CHECK(v == 0.0);

  // Gamma^1_11 = u^1.
  const ChristoffelTable t({{0, 0, 0, 1, 0, 1.0}});
  const auto g = t.evaluate(3.0, 5.0);
  CHECK(g[0][0][0] == 3.0);
  CHECK(g[0][0][1] == 0.0);
  CHECK(g[0][1][0] == 0.0);
  CHECK(g[0][1][1] == 0.0);
  CHECK(g[1][0][0] == 0.0);
  CHECK(t.degree() == 1);
}

TEST_CASE("symmetry in the lower indices") {
  const ChristoffelTable t = random_christoffel(0.1, 2, 7);
  CHECK(t.degree() == 2);
  for (double u1 : {-0.7, 0.2})
    for (double u2 : {0.4, 1.9}) {
      const auto g = t.evaluate(u1, u2);
      for (int k = 0; k < 2; ++k) CHECK(g[k][0][1] == g[k][1][0]);
    }
  // A mirrored entry with a different value is contradictory.
  CHECK_THROWS_AS(ChristoffelTable({{0, 0, 1, 0, 0, 1.0}, {0, 1, 0, 0, 0, 2.0}}), ConfigError);
  CHECK_THROWS_AS(ChristoffelTable({{0, 0, 0, 0, 0, 1.0}, {0, 0, 0, 0, 0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(ChristoffelTable({{2, 0, 0, 0, 0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(ChristoffelTable({{0, 0, 0, -1, 0, 1.0}}), ConfigError);
}

TEST_CASE("table JSON round-trip and translation") {
  const ChristoffelTable t = random_christoffel(0.3, 2, 11);
  const ChristoffelTable back = ChristoffelTable::from_json(t.to_json());
  const ChristoffelTable moved = t.translated(0.25, -0.5);
  for (double u1 : {-0.3, 0.8})
    for (double u2 : {0.1, -1.2}) {
      const auto a = t.evaluate(u1, u2), b = back.evaluate(u1, u2);
      const auto m = moved.evaluate(u1 - 0.25, u2 + 0.5);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            CHECK(a[k][i][j] == doctest::Approx(b[k][i][j]).epsilon(1e-15));
            CHECK(m[k][i][j] == doctest::Approx(a[k][i][j]).epsilon(1e-12));
          }
    }
  CHECK_THROWS_AS(ChristoffelTable::from_json(nlohmann::json::parse(R"([{"k":1,"a":1,"b":1,"l":[0,0],"c":1}])")),
                  ConfigError);
}

TEST_CASE("nonlinearity vanishes for constant fields and flat tables") {
  const Grid2 g(16.0, 64);
  const Field2 c = Field2::sample2(g, Frame::null, [](double, double) { return 0.3; },
                                   [](double, double) { return -1.0; });
  CHECK(nonlinearity(c, random_christoffel(0.5, 2, 3)).max_abs() <= 1e-12);
  const Field2 u = random_smooth_field(g, Frame::null, Arity::vector2, 4);
  CHECK(nonlinearity(u, ChristoffelTable{}).max_abs() == 0.0);
  CHECK_THROWS_AS(nonlinearity(Field2(g, Frame::null), ChristoffelTable{}), ConfigError);
}

TEST_CASE("nonlinearity at the origin by hand") {
  const Grid2 g(16.0, 256);
  auto bump = [](double a, double b) { return CutoffPair::eta(a) * CutoffPair::eta(b); };
  const Field2 u = Field2::sample2(g, Frame::null, [&](double a, double b) { return a * bump(a, b); },
                                   [&](double a, double b) { return b * bump(a, b); });
  const ChristoffelTable t({{0, 0, 1, 0, 0, 0.5}});  // Gamma^1_12 = Gamma^1_21 = 1/2
  const Field2 n = nonlinearity(u, t);
  const int o = g.size() / 2;
  // Spectral derivatives of the compactly supported bump resolve to about 1e-5 here.
  CHECK(n.at(0, o, o).real() == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(std::abs(n.at(1, o, o)) <= 1e-4);
}

TEST_CASE("sigma catalog point values") {
  const Grid2 g(8.0, 16);
  const Field2 zero(g, Frame::null, Arity::vector2);
  DiffusionCoeff sat;
  sat.kind = SigmaKind::saturating;
  sat.scale = 1.0;
  CHECK(sigma_apply(sat, zero).max_abs() == 0.0);

  DiffusionCoeff c;
  c.offset = {0.7, -0.2};
  const Field2 cf = sigma_apply(c, random_smooth_field(g, Frame::null, Arity::vector2, 1));
  CHECK(cf.at(0, 3, 5).real() == 0.7);
  CHECK(cf.at(1, 9, 2).real() == -0.2);

  DiffusionCoeff sc;
  sc.kind = SigmaKind::sin_cos;
  sc.scale = 1.0;
  const Field2 u = Field2::sample2(g, Frame::null, [](double, double) { return std::numbers::pi / 2; },
                                   [](double, double) { return 0.0; });
  const Field2 v = sigma_apply(sc, u);
  CHECK(v.at(0, 4, 4).real() == doctest::Approx(1.0));
  CHECK(v.at(1, 4, 4).real() == doctest::Approx(1.0));

  CHECK(DiffusionCoeff::zero().is_zero());
  CHECK_FALSE(sc.is_zero());
  const DiffusionCoeff moved = sc.translated(0.5, 0.25);
  const auto a = moved(0.1, 0.2), b = sc(0.6, 0.45);
  CHECK(a[0] == doctest::Approx(b[0]));
  CHECK(a[1] == doctest::Approx(b[1]));
  CHECK(DiffusionCoeff::from_json(sc.to_json()).to_json() == sc.to_json());
  CHECK_THROWS_AS(DiffusionCoeff::from_json(nlohmann::json::parse(R"({"kind":"cubic"})")), ConfigError);
  CHECK(sat.derivative_bounds()[0] == doctest::Approx(0.5));
  CHECK(sc.cb3_bound() == doctest::Approx(1.0));
}

TEST_CASE("composition constants") {
  const Grid2 g(16.0, 64);
  std::vector<Field2> ens;
  for (int k = 0; k < 6; ++k) ens.push_back(random_smooth_field(g, Frame::null, Arity::vector2, derive_seed(3, k)));
  const CompositionReport z = composition_bound_check(DiffusionCoeff::zero(), ens, 0.8, 0.8);
  CHECK(z.c1 == 0.0);

  DiffusionCoeff sine;
  sine.kind = SigmaKind::sine;
  sine.scale = 1.0;
  const std::vector<Field2> single = {ens[0]};
  const CompositionReport one = composition_bound_check(sine, single, 0.8, 0.8);
  CHECK(std::isfinite(one.c1));
  CHECK(one.c1 > 0.0);
  CHECK(one.used2 == 0);

  // Identical consecutive members carry no difference information.
  const std::vector<Field2> twins = {ens[1], ens[1]};
  const CompositionReport tw = composition_bound_check(sine, twins, 0.8, 0.8);
  CHECK(tw.used2 == 0);
  CHECK(tw.c2 == 0.0);

  const CompositionReport full = composition_bound_check(sine, ens, 0.8, 0.8);
  CHECK(full.used1 == 6);
  CHECK(full.used2 == 5);
  CHECK(std::isfinite(full.c2));
}
