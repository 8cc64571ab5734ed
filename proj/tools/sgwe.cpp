#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sgwe/acceptance.hpp"
#include "sgwe/config.hpp"
#include "sgwe/ensemble.hpp"
#include "sgwe/error.hpp"
#include "sgwe/io.hpp"
#include "sgwe/lp_decomp.hpp"
#include "sgwe/null_coords.hpp"
#include "sgwe/solver.hpp"

namespace fs = std::filesystem;
using namespace sgwe;

namespace {

enum Exit { kOk = 0, kAcceptanceFailed = 1, kConfig = 2, kIo = 3, kModule = 4 };

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> ensemble;
  std::vector<double> centers;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON run configuration")->envname("SGWE_CONFIG");
  app->add_option("--out", c.out, "output directory (overrides output.dir)")->envname("SGWE_OUT");
  app->add_option("--seed", c.seed, "base seed (overrides base_seed)")->envname("SGWE_SEED");
  app->add_option("--workers", c.workers, "worker threads")->envname("SGWE_WORKERS")->check(CLI::PositiveNumber);
  app->add_option("--ensemble", c.ensemble, "ensemble size")->envname("SGWE_ENSEMBLE")->check(CLI::PositiveNumber);
}

RunConfig load(const Common& c) {
  RunConfig cfg = c.config.empty() ? RunConfig::defaults() : RunConfig::from_json(read_json(c.config));
  if (!c.out.empty()) cfg.out_dir = c.out;
  if (c.seed) cfg.base_seed = *c.seed;
  if (c.workers) cfg.workers = *c.workers;
  if (c.ensemble) cfg.ensemble = *c.ensemble;
  if (!c.centers.empty()) cfg.centers = c.centers;
  // Round-trip so overrides pass the same validation as the file.
  return RunConfig::from_json(cfg.to_json());
}

void write_manifest(const RunConfig& cfg, const std::string& command, nlohmann::json extra = {}) {
  nlohmann::json m;
  m["command"] = command;
  m["config"] = cfg.to_json();
  m["config_hash"] = config_hash(m["config"]);
  if (!extra.is_null()) m["result"] = std::move(extra);
  write_json(fs::path(cfg.out_dir) / "manifest.json", m);
}

int sample_fbs(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  const FbsSample s = sample_sheet(cfg.grid(), cfg.hurst, cfg.require_seed());
  write_field(s.sheet, fs::path(cfg.out_dir) / "sheet");
  write_field(s.derivative, fs::path(cfg.out_dir) / "sheet_increments");
  write_manifest(cfg, "sample-fbs", {{"max_abs", s.sheet.max_abs()}});
  std::cout << "sheet written to " << cfg.out_dir << " (max |Xi| = " << s.sheet.max_abs() << ")\n";
  return kOk;
}

int verify_norms(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  const Grid2 g = cfg.grid();
  const DyadicPartition p(g);
  const std::uint64_t seed = cfg.require_seed();
  const double s = cfg.norms.s, delta = cfg.norms.delta;
  std::vector<double> besov(cfg.ensemble), iso(cfg.ensemble);
  parallel_for(cfg.ensemble, cfg.workers, [&](int k) {
    const Field2 f = random_band_limited(g, Frame::null, Arity::scalar, derive_seed(seed, k), 24);
    besov[k] = besov_norm(f, s, delta, p) / product_norm(f, s, delta);
    const Field2 u = random_smooth_field(g, Frame::cartesian, Arity::scalar, derive_seed(seed, 100000 + k), 1.0, 2.0);
    iso[k] = isomorphism_ratio(u, s, delta);
  });
  CsvWriter csv(fs::path(cfg.out_dir) / "norms.csv", {"index", "besov_over_product", "isomorphism_ratio"});
  for (int k = 0; k < cfg.ensemble; ++k) csv.row() << k << besov[k] << iso[k];
  const RatioRange b = aggregate(besov), i = aggregate(iso);
  write_manifest(cfg, "verify-norms", {{"besov", {b.low, b.high}}, {"isomorphism", {i.low, i.high}}});
  std::cout << "besov/product in [" << b.low << ", " << b.high << "], isomorphism in [" << i.low << ", "
            << i.high << "]\n";
  return kOk;
}

int verify_inverse(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  const Grid2 g = cfg.grid();
  const DyadicPartition p(g);
  const std::uint64_t seed = cfg.require_seed();
  std::vector<Field2> fs;
  for (int k = 0; k < cfg.ensemble; ++k)
    fs.push_back(random_band_limited(g, Frame::null, Arity::scalar, derive_seed(seed, k), 24));
  const InverseEstimateReport rep = inverse_estimate_check(fs, cfg.norms.s, cfg.norms.delta, 2.0, p);
  CsvWriter csv(fs::path(cfg.out_dir) / "inverse_estimate.csv", {"index", "ratio"});
  for (std::size_t k = 0; k < rep.ratios.size(); ++k) csv.row() << static_cast<int>(k) << rep.ratios[k];
  write_manifest(cfg, "verify-inverse", {{"max_ratio", rep.max_ratio}, {"skipped", rep.skipped}});
  std::cout << "max estimate ratio " << rep.max_ratio << " over " << rep.ratios.size() << " inputs\n";
  return kOk;
}

int verify_composition(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  const Grid2 g = cfg.grid();
  const std::uint64_t seed = cfg.require_seed();
  std::vector<Field2> ens;
  for (int k = 0; k < cfg.ensemble; ++k)
    ens.push_back(random_smooth_field(g, Frame::null, Arity::vector2, derive_seed(seed, k), 1.0, 2.0));
  const CompositionReport rep = composition_bound_check(cfg.sigma, ens, cfg.norms.s, cfg.norms.delta);
  CsvWriter csv(fs::path(cfg.out_dir) / "composition.csv", {"c1", "c2", "used1", "used2"});
  csv.row() << rep.c1 << rep.c2 << rep.used1 << rep.used2;
  write_manifest(cfg, "verify-composition", {{"c1", rep.c1}, {"c2", rep.c2}});
  std::cout << "C1 = " << rep.c1 << ", C2 = " << rep.c2 << "\n";
  return kOk;
}

int solve(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  SolverConfig sc = cfg.solver_config();
  sc.seed = cfg.require_seed();
  const InitialData d = cfg.data.sample(cfg.half_width, cfg.points, sc.s);
  const ChristoffelTable table = cfg.christoffel.table();
  const NoiseSource noise = default_noise(sc);
  double lambda = 0.0;
  nlohmann::json probes = nlohmann::json::array();
  if (cfg.lambda) {
    lambda = *cfg.lambda;
  } else {
    const LambdaChoice ch = choose_lambda(sc, d, noise, table, cfg.sigma);
    lambda = ch.lambda;
    for (std::size_t k = 0; k < ch.probed.size(); ++k)
      probes.push_back({{"lambda", ch.probed[k]}, {"factor", ch.probe_factor[k]}, {"norm", ch.probe_norm[k]}});
  }
  sc.lambda = lambda;
  const MildProblem p = scaled_problem(sc, lambda, d, noise, table, cfg.sigma);
  const PicardState st = picard_solve(sc, p);
  CsvWriter csv(fs::path(cfg.out_dir) / "picard.csv", {"iteration", "increment", "factor", "residual"});
  for (const PicardRow& r : st.trace) csv.row() << r.iter << r.increment << r.factor << r.residual;
  write_field(st.iterate, fs::path(cfg.out_dir) / "solution_scaled");
  write_field(rescale_solution(st.iterate, lambda), fs::path(cfg.out_dir) / "solution");
  write_manifest(cfg, "solve",
                 {{"lambda", lambda}, {"probes", probes}, {"iterations", st.iterations},
                  {"converged", st.converged}, {"max_factor", st.max_factor}, {"residual", st.residual},
                  {"mean", p.mean}});
  std::cout << "lambda " << lambda << ", " << st.iterations << " iterations, final increment "
            << st.last_increment << (st.converged ? "" : " (not converged)") << "\n";
  return st.converged ? kOk : kModule;
}

int glue(const RunConfig& cfg) {
  ensure_directory(cfg.out_dir);
  SolverConfig sc = cfg.solver_config();
  sc.seed = cfg.require_seed();
  const InitialData d = cfg.data.sample(cfg.half_width, cfg.points, sc.s);
  const GlueReport rep = glue_solutions(cfg.centers, sc, d, cfg.christoffel.table(), cfg.sigma, cfg.glue_tol,
                                        cfg.lambda, cfg.workers);
  CsvWriter csv(fs::path(cfg.out_dir) / "glue.csv",
                {"center_a", "center_b", "overlap_points", "disagreement"});
  for (std::size_t k = 0; k < rep.pair_disagreement.size(); ++k)
    csv.row() << rep.locals[k].center << rep.locals[k + 1].center << rep.pair_points[k] << rep.pair_disagreement[k];
  write_manifest(cfg, "glue", {{"lambda", rep.lambda}, {"max_disagreement", rep.max_disagreement},
                               {"success", rep.success}});
  std::cout << "lambda " << rep.lambda << ", max overlap disagreement " << rep.max_disagreement
            << (rep.success ? "" : " (above tolerance)") << "\n";
  return rep.success ? kOk : kModule;
}

int accept(const RunConfig& cfg) {
  AcceptanceOptions opt;
  opt.config = cfg;
  opt.out_dir = cfg.out_dir;
  opt.workers = cfg.workers;
  const AcceptanceReport rep =
      run_acceptance(opt, [](const CriterionResult& r) { std::cout << format_result(r) << std::endl; });
  return rep.all_pass ? kOk : kAcceptanceFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic geometric wave equation toolkit"};
  app.require_subcommand(1);
  Common common;
  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Command commands[] = {
      {"sample-fbs", "sample a fractional Brownian sheet", sample_fbs},
      {"verify-norms", "Besov/product and null-coordinate norm ratios", verify_norms},
      {"verify-inverse", "localized inverse wave operator estimate", verify_inverse},
      {"verify-composition", "composition constants of sigma", verify_composition},
      {"solve", "choose lambda and run the Picard iteration", solve},
      {"glue", "solve around several centers and compare overlaps", glue},
      {"accept", "run the acceptance suite", accept},
  };
  const Command* chosen = nullptr;
  for (const Command& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, common);
    if (std::string(c.name) == "glue")
      sub->add_option("--centers", common.centers, "comma-separated chart centers (overrides solver.centers)")
          ->delimiter(',')
          ->envname("SGWE_CENTERS");
    sub->callback([&chosen, &c] { chosen = &c; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    return chosen->run(load(common));
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kModule;
  }
}
