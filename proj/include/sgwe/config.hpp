#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgwe/fbs.hpp"
#include "sgwe/geometry.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/solver.hpp"
#include "sgwe/wave_ops.hpp"

namespace sgwe {

/// Gaussian-bump initial data, one bump per component:
///   u0^c(x) = amp0[c] exp(-(x - x0[c])^2 / width^2)
///   u1^c(x) = amp1[c] (x - x0[c]) exp(-(x - x0[c])^2 / width^2)
struct DataSpec {
  std::array<double, 2> amp0{0.1, 0.05};
  std::array<double, 2> amp1{0.05, 0.0};
  std::array<double, 2> x0{0.0, 0.5};
  double width = 1.0;

  InitialData sample(double half_width, int n, double s) const;
};

/// Either an explicit term list or a random table drawn from a seed.
struct ChristoffelSpec {
  std::optional<ChristoffelTable> explicit_table;
  double amplitude = 0.1;
  int degree = 2;
  std::uint64_t seed = 7;

  ChristoffelTable table() const;
};

/// Parsed and validated run configuration. Sections mirror the JSON file:
/// grid, hurst, norms, christoffel, sigma, solver, output, plus base_seed.
struct RunConfig {
  double half_width = 16.0;
  int points = 512;
  HurstPair hurst{0.85, 0.85};
  NormSpec norms{0.8, 0.8, NormFamily::mixed};
  ChristoffelSpec christoffel;
  DiffusionCoeff sigma;
  DataSpec data;
  double r0 = 0.5;
  std::optional<double> lambda;  // absent: chosen by doubling
  double picard_tol = 1e-8;
  int max_iters = 50;
  double lambda_cap = 65536.0;
  int probe_iters = 3;
  bool enforce_ball = true;
  double glue_tol = 1e-5;
  std::vector<double> centers{-0.25, 0.25};
  std::string out_dir = "run";
  int workers = 1;
  int ensemble = 100;
  std::optional<std::uint64_t> base_seed;

  static RunConfig defaults();
  /// Validates against the schema; unknown keys and bad ranges raise ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  /// Full document including defaults, suitable for hashing and reruns.
  nlohmann::json to_json() const;

  Grid2 grid() const { return Grid2(half_width, points); }
  SolverConfig solver_config() const;
  std::uint64_t require_seed() const;
};

}  // namespace sgwe
