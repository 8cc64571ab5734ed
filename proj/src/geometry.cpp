#include "sgwe/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/spectral.hpp"

namespace sgwe {
namespace {

using Key = std::tuple<int, int, int, int, int>;  // k, a, b, l1, l2

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_index(int v, const char* what) {
  if (v < 0 || v >= ChristoffelTable::kDim)
    throw ConfigError(std::string("Christoffel index ") + what + " out of range");
}

// sup |g^(i)| for g(x) = x / (1 + x^2), i = 0..3, rounded up.
constexpr std::array<double, 4> kSaturatingSup{0.5, 1.0, 1.46, 6.0};

double saturating(double x) { return x / (1.0 + x * x); }

SigmaKind kind_from_string(const std::string& s) {
  if (s == "zero" || s == "constant") return SigmaKind::constant;
  if (s == "sin_cos") return SigmaKind::sin_cos;
  if (s == "sin") return SigmaKind::sine;
  if (s == "saturating") return SigmaKind::saturating;
  throw ConfigError("unknown sigma kind '" + s + "'");
}

const char* kind_name(SigmaKind k) {
  switch (k) {
    case SigmaKind::constant: return "constant";
    case SigmaKind::sin_cos: return "sin_cos";
    case SigmaKind::sine: return "sin";
    case SigmaKind::saturating: return "saturating";
  }
  return "?";
}

std::array<double, 2> pair_or(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {0.0, 0.0};
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2) throw ConfigError(std::string("sigma.") + key + " must be [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

ChristoffelTable::ChristoffelTable(const std::vector<ChristoffelTerm>& terms) {
  std::map<Key, double> given;
  for (const auto& t : terms) {
    check_index(t.k, "k");
    check_index(t.a, "a");
    check_index(t.b, "b");
    if (t.l1 < 0 || t.l2 < 0) throw ConfigError("Christoffel exponents must be nonnegative");
    if (!given.emplace(Key{t.k, t.a, t.b, t.l1, t.l2}, t.coeff).second)
      throw ConfigError("duplicate Christoffel monomial");
  }
  std::map<Key, double> canonical;
  for (const auto& [key, c] : given) {
    auto [k, a, b, l1, l2] = key;
    if (a != b) {
      auto mirror = given.find(Key{k, b, a, l1, l2});
      if (mirror != given.end() && mirror->second != c)
        throw ConfigError("Christoffel symbols must be symmetric in (a, b)");
    }
    canonical[Key{k, std::min(a, b), std::max(a, b), l1, l2}] = c;
  }
  for (const auto& [key, c] : canonical) {
    if (c == 0.0) continue;
    auto [k, a, b, l1, l2] = key;
    terms_.push_back({k, a, b, l1, l2, c});
    degree_ = std::max(degree_, l1 + l2);
  }
}

ChristoffelTable ChristoffelTable::from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ConfigError("christoffel section must be an array");
  std::vector<ChristoffelTerm> terms;
  for (const auto& e : j) {
    for (auto it = e.begin(); it != e.end(); ++it)
      if (it.key() != "k" && it.key() != "a" && it.key() != "b" && it.key() != "l" &&
          it.key() != "coeff")
        throw ConfigError("unknown key '" + it.key() + "' in christoffel entry");
    const auto& l = e.at("l");
    if (!l.is_array() || l.size() != 2) throw ConfigError("christoffel l must be [l1, l2]");
    terms.push_back({e.at("k").get<int>() - 1, e.at("a").get<int>() - 1, e.at("b").get<int>() - 1,
                     l[0].get<int>(), l[1].get<int>(), e.at("coeff").get<double>()});
  }
  return ChristoffelTable(terms);
}

nlohmann::json ChristoffelTable::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms_)
    out.push_back({{"k", t.k + 1}, {"a", t.a + 1}, {"b", t.b + 1}, {"l", {t.l1, t.l2}},
                   {"coeff", t.coeff}});
  return out;
}

ChristoffelTable::Symbols ChristoffelTable::evaluate(double u1, double u2) const {
  Symbols g{};
  if (terms_.empty()) return g;
  std::vector<double> pw1(degree_ + 1, 1.0), pw2(degree_ + 1, 1.0);
  for (int i = 1; i <= degree_; ++i) {
    pw1[i] = pw1[i - 1] * u1;
    pw2[i] = pw2[i - 1] * u2;
  }
  for (const auto& t : terms_) {
    const double v = t.coeff * pw1[t.l1] * pw2[t.l2];
    g[t.k][t.a][t.b] += v;
    if (t.a != t.b) g[t.k][t.b][t.a] += v;
  }
  return g;
}

ChristoffelTable ChristoffelTable::translated(double c1, double c2) const {
  std::map<Key, double> acc;
  for (const auto& t : terms_)
    for (int p = 0; p <= t.l1; ++p)
      for (int q = 0; q <= t.l2; ++q)
        acc[Key{t.k, t.a, t.b, p, q}] += t.coeff * binomial(t.l1, p) * std::pow(c1, t.l1 - p) *
                                         binomial(t.l2, q) * std::pow(c2, t.l2 - q);
  std::vector<ChristoffelTerm> terms;
  for (const auto& [key, c] : acc) {
    auto [k, a, b, l1, l2] = key;
    terms.push_back({k, a, b, l1, l2, c});
  }
  return ChristoffelTable(terms);
}

ChristoffelTable ChristoffelTable::scaled(double factor) const {
  std::vector<ChristoffelTerm> terms = terms_;
  for (auto& t : terms) t.coeff *= factor;
  return ChristoffelTable(terms);
}

ChristoffelTable random_christoffel(double amplitude, int degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-amplitude, amplitude);
  std::vector<ChristoffelTerm> terms;
  for (int k = 0; k < ChristoffelTable::kDim; ++k)
    for (int a = 0; a < ChristoffelTable::kDim; ++a)
      for (int b = a; b < ChristoffelTable::kDim; ++b)
        for (int l1 = 0; l1 <= degree; ++l1)
          for (int l2 = 0; l1 + l2 <= degree; ++l2) terms.push_back({k, a, b, l1, l2, coeff(rng)});
  return ChristoffelTable(terms);
}

DiffusionCoeff DiffusionCoeff::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("sigma section must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "kind" && it.key() != "scale" && it.key() != "offset" && it.key() != "shift")
      throw ConfigError("unknown key '" + it.key() + "' in sigma");
  DiffusionCoeff d;
  const std::string kind = j.value("kind", std::string("zero"));
  d.kind = kind_from_string(kind);
  d.scale = kind == "zero" ? 0.0 : j.value("scale", 0.0);
  d.offset = pair_or(j, "offset");
  d.shift = pair_or(j, "shift");
  if (!std::isfinite(d.scale)) throw ConfigError("sigma.scale must be finite");
  return d;
}

nlohmann::json DiffusionCoeff::to_json() const {
  return {{"kind", kind_name(kind)},
          {"scale", scale},
          {"offset", {offset[0], offset[1]}},
          {"shift", {shift[0], shift[1]}}};
}

std::array<double, 2> DiffusionCoeff::operator()(double u1, double u2) const {
  const double x = u1 + shift[0], y = u2 + shift[1];
  switch (kind) {
    case SigmaKind::constant: return offset;
    case SigmaKind::sin_cos: return {offset[0] + scale * std::sin(x), offset[1] + scale * std::cos(y)};
    case SigmaKind::sine: return {offset[0] + scale * std::sin(x), offset[1] + scale * std::sin(y)};
    case SigmaKind::saturating:
      return {offset[0] + scale * saturating(x), offset[1] + scale * saturating(y)};
  }
  return offset;
}

std::array<double, 4> DiffusionCoeff::derivative_bounds() const {
  const double off = std::max(std::abs(offset[0]), std::abs(offset[1]));
  const double a = std::abs(scale);
  switch (kind) {
    case SigmaKind::constant: return {off, 0.0, 0.0, 0.0};
    case SigmaKind::sin_cos:
    case SigmaKind::sine: return {off + a, a, a, a};
    case SigmaKind::saturating:
      return {off + a * kSaturatingSup[0], a * kSaturatingSup[1], a * kSaturatingSup[2],
              a * kSaturatingSup[3]};
  }
  return {};
}

double DiffusionCoeff::cb3_bound() const {
  const auto b = derivative_bounds();
  return *std::max_element(b.begin(), b.end());
}

DiffusionCoeff DiffusionCoeff::translated(double c1, double c2) const {
  DiffusionCoeff d = *this;
  d.shift = {shift[0] + c1, shift[1] + c2};
  return d;
}

bool DiffusionCoeff::is_zero() const {
  return (kind == SigmaKind::constant || scale == 0.0) && offset[0] == 0.0 && offset[1] == 0.0;
}

Field2 nonlinearity(const Field2& u, const ChristoffelTable& table) {
  if (u.arity() != Arity::vector2) throw ConfigError("nonlinearity expects an R^2-valued field");
  Field2 out = u.zeros_like();
  if (table.flat()) return out;
  const Field2 da = spectral_derivative(u, Axis::first);
  const Field2 db = spectral_derivative(u, Axis::second);
  for (std::size_t q = 0; q < u.grid().cells(); ++q) {
    const auto g = table.evaluate(u.plane(0)[q].real(), u.plane(1)[q].real());
    const double a[2] = {da.plane(0)[q].real(), da.plane(1)[q].real()};
    const double b[2] = {db.plane(0)[q].real(), db.plane(1)[q].real()};
    for (int k = 0; k < 2; ++k) {
      double acc = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) acc += g[k][i][j] * a[i] * b[j];
      out.plane(k)[q] = 4.0 * acc;
    }
  }
  return out;
}

Field2 sigma_apply(const DiffusionCoeff& sigma, const Field2& u) {
  if (u.arity() != Arity::vector2) throw ConfigError("sigma_apply expects an R^2-valued field");
  Field2 out = u.zeros_like();
  for (std::size_t q = 0; q < u.grid().cells(); ++q) {
    const auto v = sigma(u.plane(0)[q].real(), u.plane(1)[q].real());
    out.plane(0)[q] = v[0];
    out.plane(1)[q] = v[1];
  }
  return out;
}

CompositionReport composition_bound_check(const DiffusionCoeff& sigma,
                                          std::span<const Field2> ensemble, double s,
                                          double delta) {
  if (ensemble.empty()) throw ConfigError("composition check needs a nonempty ensemble");
  CompositionReport r;
  std::vector<double> norms;
  std::vector<Field2> composed;
  for (const auto& u : ensemble) {
    norms.push_back(mixed_norm(u, s, delta));
    composed.push_back(sigma_apply(sigma, u));
  }
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const double nu = norms[i];
    if (nu == 0.0) continue;
    const double lhs = std::pow(mixed_norm(composed[i], s, delta), 2);
    r.c1 = std::max(r.c1, lhs / (nu * nu * (1.0 + nu * nu)));
    ++r.used1;
  }
  for (std::size_t i = 0; i + 1 < ensemble.size(); ++i) {
    const double d = mixed_norm(ensemble[i] - ensemble[i + 1], s, delta);
    if (d == 0.0) continue;
    double poly = 1.0;
    for (double n : {norms[i], norms[i + 1]})
      for (int k = 1; k <= 2; ++k) poly += std::pow(n, 2 * k);
    const double lhs = std::pow(mixed_norm(composed[i] - composed[i + 1], s, delta), 2);
    r.c2 = std::max(r.c2, lhs / (d * d * poly));
    ++r.used2;
  }
  return r;
}

}  // namespace sgwe
