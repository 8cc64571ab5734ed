#include "sgwe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/spectral.hpp"

namespace sgwe {

namespace {

double vector_norm(const Field2& f, const SolverConfig& cfg) {
  return mixed_norm(f, cfg.s, cfg.delta);
}

// Memoizes one sheet per lambda; sampling is the expensive part of a probe.
NoiseSource memoized(std::function<FbsSample(double)> make) {
  struct Cache {
    std::mutex m;
    std::map<double, std::shared_ptr<const FbsSample>> by_lambda;
  };
  auto cache = std::make_shared<Cache>();
  return [cache, make = std::move(make)](double lambda) {
    {
      std::lock_guard lock(cache->m);
      auto it = cache->by_lambda.find(lambda);
      if (it != cache->by_lambda.end()) return *it->second;
    }
    auto sample = std::make_shared<const FbsSample>(make(lambda));
    std::lock_guard lock(cache->m);
    cache->by_lambda.emplace(lambda, sample);
    return *sample;
  };
}

// Localized data on `grid` where grid coordinate a sits at center + mu * a.
InitialData localized_data(const InitialData& d, const Grid2& grid, double center, double mu,
                           double cutoff_t, const std::array<double, 2>& mean) {
  const int n = grid.size();
  std::vector<double> targets(n);
  for (int i = 0; i < n; ++i) targets[i] = center + mu * grid.coord(i);
  InitialData out = InitialData::zeros(grid.half_width(), n);
  out.s = d.s;
  for (int c = 0; c < 2; ++c) {
    const auto u0 = interpolate_periodic(d.u0[c], d.half_width, targets);
    const auto u1 = interpolate_periodic(d.u1[c], d.half_width, targets);
    for (int i = 0; i < n; ++i) {
      const double chi = CutoffPair::chi(grid.coord(i) / cutoff_t);
      out.u0[c][i] = chi * (u0[i] - mean[c]);
      out.u1[c][i] = chi * mu * u1[i];
    }
  }
  return out;
}

std::array<double, 2> psi_mean(const InitialData& d, double lambda, const Grid2& grid,
                               double center) {
  const int n = grid.size();
  std::vector<double> targets(n);
  for (int i = 0; i < n; ++i) targets[i] = center + grid.coord(i) / lambda;
  std::array<double, 2> mean{0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    const auto u0 = interpolate_periodic(d.u0[c], d.half_width, targets);
    // Periodic trapezoid; psi vanishes well inside the window.
    for (int i = 0; i < n; ++i) mean[c] += u0[i] * CutoffPair::psi(grid.coord(i)) * grid.spacing();
  }
  return mean;
}

MildProblem assemble(const Grid2& grid, double lambda, double center, double mu, double cutoff_t,
                     const std::array<double, 2>& mean, const InitialData& d,
                     const NoiseSource& noise, const ChristoffelTable& table,
                     const DiffusionCoeff& sigma) {
  MildProblem p;
  p.grid = grid;
  p.lambda = lambda;
  p.center = center;
  p.mu = mu;
  p.cutoff_t = cutoff_t;
  p.mean = mean;
  p.data = localized_data(d, grid, center, mu, cutoff_t, mean);
  p.table = table.translated(mean[0], mean[1]);
  p.sigma = sigma.translated(mean[0], mean[1]);
  if (!sigma.is_zero()) p.noise = scale_noise(noise(lambda), 1.0 / mu, grid, center);
  return p;
}

int power_of_two_at_least(double x) {
  int n = 4;
  while (n < x) n *= 2;
  return n;
}

}  // namespace

void SolverConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("solver config: " + m); };
  if (!(s > 0.75 && s < 1.0) || !(delta > 0.75 && delta < 1.0)) fail("s and delta must lie in (3/4, 1)");
  if (s < delta) fail("s must be at least delta");
  if (s + delta <= 1.5) fail("s + delta must exceed 3/2");
  hurst.validate();
  if (!(hurst.h1 > s && hurst.h2 > s && hurst.h1 < 1.0 && hurst.h2 < 1.0))
    fail("Hurst indices must lie in (s, 1)");
  if (!(lambda >= 1.0)) fail("lambda must be at least 1");
  if (!(r0 > 0.0 && r0 < 1.0)) fail("r0 must lie in (0, 1)");
  grid.require_cutoff_margin();
  if (!(picard_tol > 0.0)) fail("picard_tol must be positive");
  if (max_iters < 1) fail("max_iters must be at least 1");
  if (!(lambda_cap >= 1.0)) fail("lambda_cap must be at least 1");
  if (probe_iters < 2) fail("probe_iters must be at least 2");
}

NoiseSource default_noise(const SolverConfig& cfg) {
  const Grid2 grid = cfg.grid;
  const HurstPair hurst = cfg.hurst;
  const std::uint64_t seed = cfg.seed;
  return memoized([=](double lambda) {
    return sample_sheet(Grid2(grid.half_width() / lambda, grid.size()), hurst, seed);
  });
}

NoiseSource shared_noise(const SolverConfig& cfg, double max_abs_center) {
  const Grid2 grid = cfg.grid;
  const HurstPair hurst = cfg.hurst;
  const std::uint64_t seed = cfg.seed;
  return memoized([=](double lambda) {
    // Spacing dx / lambda, half-width covering L / lambda around every center.
    const double dx = grid.spacing() / lambda;
    const double reach = grid.half_width() / lambda + std::abs(max_abs_center);
    const int n = power_of_two_at_least(2.0 * reach / dx - 1e-9);
    return sample_sheet(Grid2(0.5 * n * dx, n), hurst, seed);
  });
}

ScaledData scale_data(const InitialData& d, double lambda, const Grid2& grid, double center) {
  if (!(lambda >= 1.0)) throw ConfigError("lambda must be at least 1");
  ScaledData out;
  out.mean = psi_mean(d, lambda, grid, center);
  out.data = localized_data(d, grid, center, 1.0 / lambda, 1.0, out.mean);
  return out;
}

FbsSample scale_noise(const FbsSample& base, double lambda, const Grid2& target, double shift) {
  if (!(lambda > 0.0)) throw ConfigError("noise dilation needs a positive factor");
  const Grid2& bg = base.grid();
  const int nb = bg.size();
  const double lb = bg.half_width(), db = bg.spacing();
  const int n = target.size();
  constexpr double kSnap = 1e-9;

  // Fractional base index of an original coordinate, validated against the window.
  auto locate = [&](double x, int& i0, double& t) {
    const double f = (x + lb) / db;
    if (f < -kSnap || f > nb + kSnap)
      throw DomainError("dilated noise point " + std::to_string(x) + " lies outside the sheet window [" +
                        std::to_string(-lb) + ", " + std::to_string(lb) + "]");
    i0 = static_cast<int>(std::floor(f + kSnap));
    t = f - i0;
    if (std::abs(t) < kSnap) t = 0.0;
    i0 = std::clamp(i0, 0, nb);
  };
  std::vector<int> ia(n), ib(n);
  std::vector<double> ta(n), tb(n);
  for (int i = 0; i < n; ++i) {
    locate(shift + target.coord(i) / lambda, ia[i], ta[i]);
    locate(-shift + target.coord(i) / lambda, ib[i], tb[i]);
  }
  // Index nb is the point +L, equal to -L by the even reflection.
  auto value = [&](int i, int j) { return base.sheet.at(0, i % nb, j % nb).real(); };

  Field2 sheet(target, Frame::null);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double a = ta[i], b = tb[j];
      double v = (1 - a) * (1 - b) * value(ia[i], ib[j]);
      if (a > 0.0) v += a * (1 - b) * value(ia[i] + 1, ib[j]);
      if (b > 0.0) v += (1 - a) * b * value(ia[i], ib[j] + 1);
      if (a > 0.0 && b > 0.0) v += a * b * value(ia[i] + 1, ib[j] + 1);
      sheet.at(0, i, j) = v;
    }
  Field2 derivative = increment_field(sheet);
  return FbsSample{std::move(sheet), std::move(derivative), base.seed, base.hurst};
}

MildProblem scaled_problem(const SolverConfig& cfg, double lambda, const InitialData& d,
                           const NoiseSource& noise, const ChristoffelTable& table,
                           const DiffusionCoeff& sigma, double center) {
  if (!(lambda >= 1.0)) throw ConfigError("lambda must be at least 1");
  const auto mean = psi_mean(d, lambda, cfg.grid, center);
  return assemble(cfg.grid, lambda, center, 1.0 / lambda, 1.0, mean, d, noise, table, sigma);
}

MildProblem rescaled_problem(const MildProblem& scaled, const InitialData& d,
                             const NoiseSource& noise, const ChristoffelTable& table,
                             const DiffusionCoeff& sigma) {
  const Grid2 grid(scaled.grid.half_width() / scaled.lambda, scaled.grid.size());
  return assemble(grid, scaled.lambda, scaled.center, 1.0, 1.0 / scaled.lambda, scaled.mean, d,
                  noise, table, sigma);
}

Field2 theta_map(const Field2& u, const MildProblem& p) {
  if (!(u.grid() == p.grid) || u.arity() != Arity::vector2)
    throw ConfigError("iterate does not live on the problem grid");
  Field2 f = homogeneous_solution(p.data, p.grid);
  if (!p.table.flat()) f += dalembert_inverse_quadrature(nonlinearity(u, p.table));
  if (p.noise) f += stochastic_convolution(u, p.sigma, *p.noise);
  return localize(f, p.cutoff_t);
}

PicardState picard_solve(const SolverConfig& cfg, const MildProblem& p,
                         const std::optional<Field2>& start, int max_iters_override) {
  const int max_iters = max_iters_override > 0 ? max_iters_override : cfg.max_iters;
  PicardState st;
  st.iterate = start ? *start : Field2(p.grid, Frame::null, Arity::vector2);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double prev = nan;
  int bad = 0;
  for (int n = 1; n <= max_iters; ++n) {
    Field2 next = theta_map(st.iterate, p);
    const double inc = vector_norm(next - st.iterate, cfg);
    const double norm = vector_norm(next, cfg);
    if (!std::isfinite(inc) || !std::isfinite(norm))
      throw DivergenceError("Picard iterate " + std::to_string(n) + " is not finite at lambda " +
                            std::to_string(p.lambda) + "; try a larger lambda");
    st.max_norm = std::max(st.max_norm, norm);
    if (norm > cfg.r0) {
      st.in_ball = false;
      if (cfg.enforce_ball)
        throw DivergenceError("Picard iterate " + std::to_string(n) + " has norm " +
                              std::to_string(norm) + " outside the ball of radius " +
                              std::to_string(cfg.r0) + " at lambda " + std::to_string(p.lambda));
    }
    double factor = nan;
    if (n >= 2 && prev > kIncrementFloor) {
      factor = inc / prev;
      st.factors.push_back(factor);
      st.max_factor = std::max(st.max_factor, factor);
      bad = factor >= 1.0 ? bad + 1 : 0;
      if (bad >= 3)
        throw DivergenceError("Picard iteration is not contracting at lambda " +
                              std::to_string(p.lambda) + " (factor " + std::to_string(factor) +
                              "); try a larger lambda");
    }
    // The defect of u_n is this increment; record it on the previous row.
    if (!st.trace.empty()) st.trace.back().residual = inc;
    st.trace.push_back({n, inc, factor, nan});
    st.iterate = std::move(next);
    st.iterations = n;
    st.last_increment = inc;
    prev = inc;
    if (inc <= cfg.picard_tol) {
      st.converged = true;
      break;
    }
  }
  st.residual = vector_norm(theta_map(st.iterate, p) - st.iterate, cfg);
  st.trace.back().residual = st.residual;
  return st;
}

LambdaChoice choose_lambda(const SolverConfig& cfg, const InitialData& d, const NoiseSource& noise,
                           const ChristoffelTable& table, const DiffusionCoeff& sigma,
                           double center) {
  SolverConfig probe = cfg;
  probe.enforce_ball = false;
  probe.picard_tol = 0.0;
  LambdaChoice out;
  for (double lambda = 1.0; lambda <= cfg.lambda_cap; lambda *= 2.0) {
    out.probed.push_back(lambda);
    double factor = std::numeric_limits<double>::infinity();
    double norm = factor;
    try {
      const MildProblem p = scaled_problem(cfg, lambda, d, noise, table, sigma, center);
      const PicardState st = picard_solve(probe, p, std::nullopt, cfg.probe_iters);
      factor = st.max_factor;
      norm = st.max_norm;
    } catch (const DivergenceError&) {
      // Not contracting at this lambda; keep doubling.
    }
    out.probe_factor.push_back(factor);
    out.probe_norm.push_back(norm);
    if (factor <= 0.5 && norm <= cfg.r0) {
      out.lambda = lambda;
      return out;
    }
  }
  std::string trail;
  for (std::size_t i = 0; i < out.probed.size(); ++i)
    trail += " [lambda " + std::to_string(out.probed[i]) + ": factor " +
             std::to_string(out.probe_factor[i]) + ", norm " + std::to_string(out.probe_norm[i]) + "]";
  throw DivergenceError("no lambda up to the cap " + std::to_string(cfg.lambda_cap) +
                        " gives a 1/2-contraction inside the ball:" + trail);
}

Field2 rescale_solution(const Field2& u_lambda, double lambda) {
  if (!(lambda >= 1.0)) throw ConfigError("lambda must be at least 1");
  const Grid2& g = u_lambda.grid();
  return u_lambda.relabelled(Grid2(g.half_width() / lambda, g.size()));
}

Field2 rescale_solution(const Field2& u_lambda, double lambda, const Grid2& target) {
  const Field2 u = rescale_solution(u_lambda, lambda);
  const double l = u.grid().half_width();
  const int n = target.size();
  for (int i = 0; i < n; ++i)
    if (target.coord(i) < -l || target.coord(i) >= l)
      throw DomainError("target point " + std::to_string(target.coord(i)) +
                        " lies outside the rescaled window");
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = target.coord(i);
  const Spectrum2 spec = dft2(u);
  Field2 out(target, u.frame(), u.arity());
  for (int c = 0; c < u.components(); ++c) {
    const auto vals = evaluate_tensor(spec, c, xs, xs);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.at(c, i, j) = vals[static_cast<std::size_t>(i) * n + j];
  }
  return out;
}

double residual(const Field2& u, const SolverConfig& cfg, const MildProblem& p) {
  return vector_norm(u - theta_map(u, p), cfg);
}

GlueReport glue_solutions(std::vector<double> centers, const SolverConfig& cfg,
                          const InitialData& d, const ChristoffelTable& table,
                          const DiffusionCoeff& sigma, double glue_tol,
                          std::optional<double> lambda, int workers) {
  cfg.validate();
  GlueReport rep;
  if (centers.empty()) return rep;
  double reach = 0.0;
  for (double c : centers) reach = std::max(reach, std::abs(c));
  const NoiseSource noise = shared_noise(cfg, reach + cfg.grid.spacing());

  if (lambda) {
    if (!(*lambda >= 1.0)) throw ConfigError("lambda must be at least 1");
    rep.lambda = *lambda;
  } else {
    std::vector<double> chosen(centers.size(), 1.0);
    parallel_for(static_cast<int>(centers.size()), workers, [&](int k) {
      chosen[k] = choose_lambda(cfg, d, noise, table, sigma, centers[k]).lambda;
    });
    rep.lambda = *std::max_element(chosen.begin(), chosen.end());
  }
  const double lam = rep.lambda;
  const double step = cfg.grid.spacing() / lam;
  std::vector<long> offset(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    offset[k] = std::lround(centers[k] / step);
    centers[k] = offset[k] * step;
  }

  rep.locals.resize(centers.size());
  parallel_for(static_cast<int>(centers.size()), workers, [&](int k) {
    try {
      const MildProblem p = scaled_problem(cfg, lam, d, noise, table, sigma, centers[k]);
      LocalSolution& loc = rep.locals[k];
      loc.center = centers[k];
      loc.lambda = lam;
      loc.mean = p.mean;
      loc.state = picard_solve(cfg, p);
      loc.u = loc.state.iterate;
      loc.residual = loc.state.residual;
      loc.norm = vector_norm(loc.u, cfg);
    } catch (const DivergenceError& e) {
      throw DivergenceError("center " + std::to_string(centers[k]) + ": " + e.what());
    }
  });

  // Grid point i of center k sits at alpha = c_k + a_i / lambda, so moving to
  // center m shifts the alpha index by -(o_m - o_k) and the beta index by +(o_m - o_k).
  const Grid2& g = cfg.grid;
  const int n = g.size();
  const double r = 2.0 + 1e-9;
  for (std::size_t k = 0; k + 1 < centers.size(); ++k) {
    const long shift = offset[k + 1] - offset[k];
    const LocalSolution& a = rep.locals[k];
    const LocalSolution& b = rep.locals[k + 1];
    double worst = 0.0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      const long i2 = i - shift;
      if (i2 < 0 || i2 >= n || std::abs(g.coord(i)) > r || std::abs(g.coord(i2)) > r) continue;
      for (int j = 0; j < n; ++j) {
        const long j2 = j + shift;
        if (j2 < 0 || j2 >= n || std::abs(g.coord(j)) > r || std::abs(g.coord(j2)) > r) continue;
        ++count;
        for (int c = 0; c < 2; ++c) {
          const double va = a.u.at(c, i, j).real() + a.mean[c];
          const double vb = b.u.at(c, static_cast<int>(i2), static_cast<int>(j2)).real() + b.mean[c];
          worst = std::max(worst, std::abs(va - vb));
        }
      }
    }
    if (count == 0)
      throw ConfigError("centers " + std::to_string(centers[k]) + " and " +
                        std::to_string(centers[k + 1]) + " have no overlapping window at lambda " +
                        std::to_string(lam));
    rep.pair_disagreement.push_back(worst);
    rep.pair_points.push_back(count);
    rep.max_disagreement = std::max(rep.max_disagreement, worst);
  }
  rep.success = rep.max_disagreement <= glue_tol;
  return rep;
}

}  // namespace sgwe
