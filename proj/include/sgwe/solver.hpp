#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sgwe/cutoff.hpp"
#include "sgwe/fbs.hpp"
#include "sgwe/geometry.hpp"
#include "sgwe/wave_ops.hpp"

namespace sgwe {

struct SolverConfig {
  double s = 0.8;
  double delta = 0.8;
  HurstPair hurst{0.85, 0.85};
  double lambda = 1.0;  // scaling used by picard_solve; choose_lambda ignores it
  double r0 = 0.5;      // ball radius in the mixed H^{s,delta} norm
  Grid2 grid{16.0, 512};
  double picard_tol = 1e-8;
  int max_iters = 50;
  std::uint64_t seed = 0;
  double lambda_cap = 65536.0;
  int probe_iters = 3;
  bool enforce_ball = true;

  /// Throws ConfigError on any out-of-range parameter.
  void validate() const;
};

/// Provides the sheet in original coordinates for a given scaling. The sheet
/// must cover every point center + a / lambda used by the caller; sampling it
/// at spacing dx / lambda makes every dilated point a grid node.
using NoiseSource = std::function<FbsSample(double lambda)>;

/// Sheet on Grid2(L / lambda, N) from the config grid, hurst and seed.
NoiseSource default_noise(const SolverConfig& cfg);
/// Sheet at spacing dx / lambda wide enough for every center in the list.
NoiseSource shared_noise(const SolverConfig& cfg, double max_abs_center);

/// Everything the fixed-point map needs, expressed on one grid whose
/// coordinate a corresponds to the original point center + mu * a.
struct MildProblem {
  Grid2 grid{16.0, 512};
  double lambda = 1.0;
  double center = 0.0;
  double mu = 1.0;            // original length per grid unit
  double cutoff_t = 1.0;      // window eta(a / t) eta(b / t)
  std::array<double, 2> mean{0.0, 0.0};  // data mean removed by the chart translation
  InitialData data;           // localized, mean-free data on the grid
  ChristoffelTable table;     // translated by the mean
  DiffusionCoeff sigma;       // translated by the mean
  std::optional<FbsSample> noise;  // absent when sigma vanishes
};

/// u0^lambda = chi (u0(./lambda) - mean), u1^lambda = chi lambda^{-1} u1(./lambda)
/// on the solver grid, with the mean taken against psi. `center` translates
/// the data first, so the diagonal point (center, -center) maps to the origin.
struct ScaledData {
  InitialData data;
  std::array<double, 2> mean{0.0, 0.0};
};
ScaledData scale_data(const InitialData& d, double lambda, const Grid2& grid, double center = 0.0);

/// Sheet values Xi(shift + a / lambda, -shift + b / lambda) at every target
/// grid point, with the increment field recomputed on the target grid. Exact
/// at base-grid nodes and bilinear in between; points outside the base window
/// raise DomainError.
FbsSample scale_noise(const FbsSample& base, double lambda, const Grid2& target, double shift = 0.0);

/// Problem on the scaled window (mu = 1 / lambda, cutoff_t = 1).
MildProblem scaled_problem(const SolverConfig& cfg, double lambda, const InitialData& d,
                           const NoiseSource& noise, const ChristoffelTable& table,
                           const DiffusionCoeff& sigma, double center = 0.0);
/// The same problem written in original coordinates on Grid2(L / lambda, N)
/// (mu = 1, cutoff_t = 1 / lambda), reusing the mean of the scaled problem.
MildProblem rescaled_problem(const MildProblem& scaled, const InitialData& d,
                             const NoiseSource& noise, const ChristoffelTable& table,
                             const DiffusionCoeff& sigma);

/// eta eta (S(data) + inverse box of N(u) + stochastic convolution of sigma(u)).
Field2 theta_map(const Field2& u, const MildProblem& p);

struct PicardRow {
  int iter = 0;
  double increment = 0.0;  // ||u_{n+1} - u_n||
  double factor = 0.0;     // increment ratio, NaN before it is defined
  double residual = 0.0;   // ||u_{n+1} - theta(u_{n+1})||
};

struct PicardState {
  Field2 iterate{Grid2(1.0, 4), Frame::null, Arity::vector2};
  int iterations = 0;
  double last_increment = 0.0;
  std::vector<double> factors;  // recorded from the second iteration on
  double max_factor = 0.0;
  double max_norm = 0.0;        // largest iterate norm seen
  bool in_ball = true;
  bool converged = false;
  double residual = 0.0;
  std::vector<PicardRow> trace;
};

/// Increments below this are treated as converged to roundoff, so their
/// ratios are not reported as contraction factors.
inline constexpr double kIncrementFloor = 1e-13;

/// Iterates u_{n+1} = theta(u_n) from `start` (zero by default) until the
/// increment drops to picard_tol or max_iters is hit. Three consecutive
/// factors >= 1 raise DivergenceError; leaving the ball raises it too when
/// cfg.enforce_ball is set.
PicardState picard_solve(const SolverConfig& cfg, const MildProblem& p,
                         const std::optional<Field2>& start = std::nullopt,
                         int max_iters_override = 0);

struct LambdaChoice {
  double lambda = 1.0;
  std::vector<double> probed;       // lambdas tried, in order
  std::vector<double> probe_factor; // max factor per probe
  std::vector<double> probe_norm;   // max iterate norm per probe
};

/// Doubles lambda from 1 until a short probe run contracts by 1/2 or better
/// and stays in the ball; DivergenceError past cfg.lambda_cap.
LambdaChoice choose_lambda(const SolverConfig& cfg, const InitialData& d, const NoiseSource& noise,
                           const ChristoffelTable& table, const DiffusionCoeff& sigma,
                           double center = 0.0);

/// u(alpha, beta) = u^lambda(lambda alpha, lambda beta): the same samples on
/// Grid2(L / lambda, N).
Field2 rescale_solution(const Field2& u_lambda, double lambda);
/// As above, then evaluated spectrally at the points of `target`; points
/// outside the rescaled window raise DomainError.
Field2 rescale_solution(const Field2& u_lambda, double lambda, const Grid2& target);

/// ||u - theta(u)|| in the mixed H^{s,delta} norm of the problem's grid.
double residual(const Field2& u, const SolverConfig& cfg, const MildProblem& p);

struct LocalSolution {
  double center = 0.0;
  Field2 u{Grid2(1.0, 4), Frame::null, Arity::vector2};  // on the scaled window
  double lambda = 1.0;
  std::array<double, 2> mean{0.0, 0.0};
  double residual = 0.0;
  double norm = 0.0;      // ||u||_{H^{s,delta}}, certificate against r0
  PicardState state;
};

struct GlueReport {
  double lambda = 1.0;
  std::vector<LocalSolution> locals;
  std::vector<double> pair_disagreement;  // sup norm on each consecutive overlap
  std::vector<int> pair_points;           // overlap sample counts
  double max_disagreement = 0.0;
  bool success = true;
};

/// Local solutions in translated charts around each diagonal point
/// (c, -c), compared in original coordinates (v + mean) on the overlap of
/// consecutive domains of determinacy |alpha - c| <= 2/lambda,
/// |beta + c| <= 2/lambda. Centers are rounded to the shared lattice.
/// A given lambda is used as is; otherwise lambda is the largest
/// choose_lambda value over the centers. Centers are solved concurrently.
GlueReport glue_solutions(std::vector<double> centers, const SolverConfig& cfg,
                          const InitialData& d, const ChristoffelTable& table,
                          const DiffusionCoeff& sigma, double glue_tol = 1e-5,
                          std::optional<double> lambda = std::nullopt, int workers = 1);

}  // namespace sgwe
