#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "sgwe/field.hpp"

namespace sgwe {

/// One monomial A^l_{ab} u1^l1 u2^l2 contributing to Gamma^k_{ab}; indices
/// are zero-based here and one-based in JSON.
struct ChristoffelTerm {
  int k = 0;
  int a = 0;
  int b = 0;
  int l1 = 0;
  int l2 = 0;
  double coeff = 0.0;
};

/// Gamma^k_{ab}(u) = sum_{|l| <= r} A^l_{ab} u^l for a 2-dimensional target.
///
/// Symmetry in (a, b) is enforced at construction: a term given for (a, b)
/// is mirrored onto (b, a); giving both with different coefficients, or the
/// same monomial twice, is a ConfigError. Target dimension is fixed at 2.
class ChristoffelTable {
 public:
  static constexpr int kDim = 2;
  using Symbols = std::array<std::array<std::array<double, kDim>, kDim>, kDim>;  // [k][a][b]

  ChristoffelTable() = default;
  explicit ChristoffelTable(const std::vector<ChristoffelTerm>& terms);

  static ChristoffelTable from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  bool flat() const { return terms_.empty(); }
  int degree() const { return degree_; }
  /// Canonical terms with a <= b.
  const std::vector<ChristoffelTerm>& terms() const { return terms_; }

  Symbols evaluate(double u1, double u2) const;

  /// Table of v -> Gamma(v + shift), i.e. the same connection in a translated chart.
  ChristoffelTable translated(double c1, double c2) const;
  ChristoffelTable scaled(double factor) const;

 private:
  std::vector<ChristoffelTerm> terms_;
  int degree_ = 0;
};

/// Random table with every coefficient uniform in [-amplitude, amplitude]
/// over all k, a <= b and |l| <= degree.
ChristoffelTable random_christoffel(double amplitude, int degree, std::uint64_t seed);

enum class SigmaKind { constant, sin_cos, sine, saturating };

/// Closed catalog of bounded smooth maps R^2 -> R^2:
///   constant:   offset
///   sin_cos:    offset + scale * (sin(u1 + h1), cos(u2 + h2))
///   sine:       offset + scale * (sin(u1 + h1), sin(u2 + h2))
///   saturating: offset + scale * (g(u1 + h1), g(u2 + h2)), g(x) = x / (1 + x^2)
/// where (h1, h2) is the argument shift. Every entry carries its C_b^3 data.
struct DiffusionCoeff {
  SigmaKind kind = SigmaKind::constant;
  double scale = 0.0;
  std::array<double, 2> offset{0.0, 0.0};
  std::array<double, 2> shift{0.0, 0.0};

  static DiffusionCoeff zero() { return {}; }
  static DiffusionCoeff from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  std::array<double, 2> operator()(double u1, double u2) const;
  /// Bounds on sup |D^i sigma| for i = 0..3 (componentwise maps).
  std::array<double, 4> derivative_bounds() const;
  /// ||sigma||_{C_b^3} as the max of derivative_bounds().
  double cb3_bound() const;
  /// v -> sigma(v + c).
  DiffusionCoeff translated(double c1, double c2) const;
  bool is_zero() const;
};

/// N^k(u) = 4 sum_{a,b} Gamma^k_{ab}(u) d_alpha u^a d_beta u^b, pointwise on
/// the grid with spectral derivatives and no dealiasing.
Field2 nonlinearity(const Field2& u, const ChristoffelTable& table);

/// Pointwise sigma(u(alpha, beta)).
Field2 sigma_apply(const DiffusionCoeff& sigma, const Field2& u);

struct CompositionReport {
  double c1 = 0.0;  // max ||s o u||^2 / (||u||^2 (1 + ||u||^2))
  double c2 = 0.0;  // max ||s o u1 - s o u2||^2 / (||u1 - u2||^2 (1 + sum_{i,k} ||u_i||^{2k}))
  int used1 = 0;
  int used2 = 0;
};

/// Empirical composition constants over an ensemble, in the mixed H^{s,delta}
/// norm. Zero-norm fields and identical pairs (consecutive members) are skipped.
CompositionReport composition_bound_check(const DiffusionCoeff& sigma,
                                          std::span<const Field2> ensemble, double s,
                                          double delta);

}  // namespace sgwe
