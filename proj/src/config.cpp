#include "sgwe/config.hpp"

#include <cmath>
#include <set>

#include "sgwe/error.hpp"

namespace sgwe {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError("section '" + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in section '" + section + "'");
}

template <typename T>
void read(const json& j, const char* key, T& into, const std::string& section) {
  if (!j.contains(key)) return;
  try {
    into = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("wrong type for " + section + "." + key);
  }
}

void read_pair(const json& j, const char* key, std::array<double, 2>& into, const std::string& section) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(section + "." + key + " must be a pair of numbers");
  into = {v[0].get<double>(), v[1].get<double>()};
}

NormFamily family_from_string(const std::string& s) {
  for (NormFamily f : {NormFamily::product_ab, NormFamily::product_ba, NormFamily::mixed,
                       NormFamily::hyperbolic, NormFamily::besov_s22})
    if (s == to_string(f)) return f;
  throw ConfigError("unknown norm family '" + s + "'");
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

InitialData DataSpec::sample(double half_width, int n, double s) const {
  const DataSpec d = *this;
  InitialData out = InitialData::sample(
      half_width, n,
      [&](double x) {
        std::array<double, 2> v{};
        for (int c = 0; c < 2; ++c) {
          const double y = x - d.x0[c];
          v[c] = d.amp0[c] * std::exp(-y * y / (d.width * d.width));
        }
        return v;
      },
      [&](double x) {
        std::array<double, 2> v{};
        for (int c = 0; c < 2; ++c) {
          const double y = x - d.x0[c];
          v[c] = d.amp1[c] * y * std::exp(-y * y / (d.width * d.width));
        }
        return v;
      });
  out.s = s;
  return out;
}

ChristoffelTable ChristoffelSpec::table() const {
  if (explicit_table) return *explicit_table;
  if (amplitude == 0.0) return ChristoffelTable{};
  return random_christoffel(amplitude, degree, seed);
}

RunConfig RunConfig::defaults() {
  RunConfig c;
  c.sigma.kind = SigmaKind::sin_cos;
  c.sigma.scale = 0.1;
  return c;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c = defaults();
  only_keys(j, "root", {"grid", "hurst", "norms", "christoffel", "sigma", "solver", "output", "base_seed"});

  if (j.contains("grid")) {
    const json& g = j.at("grid");
    only_keys(g, "grid", {"half_width", "points"});
    read(g, "half_width", c.half_width, "grid");
    read(g, "points", c.points, "grid");
  }
  if (j.contains("hurst")) {
    const json& h = j.at("hurst");
    only_keys(h, "hurst", {"h1", "h2"});
    read(h, "h1", c.hurst.h1, "hurst");
    read(h, "h2", c.hurst.h2, "hurst");
  }
  if (j.contains("norms")) {
    const json& n = j.at("norms");
    only_keys(n, "norms", {"s", "delta", "family"});
    read(n, "s", c.norms.s, "norms");
    read(n, "delta", c.norms.delta, "norms");
    if (n.contains("family")) {
      std::string fam;
      read(n, "family", fam, "norms");
      c.norms.family = family_from_string(fam);
    }
  }
  if (j.contains("christoffel")) {
    const json& t = j.at("christoffel");
    if (t.is_array()) {
      c.christoffel.explicit_table = ChristoffelTable::from_json(t);
    } else {
      only_keys(t, "christoffel", {"amplitude", "degree", "seed"});
      read(t, "amplitude", c.christoffel.amplitude, "christoffel");
      read(t, "degree", c.christoffel.degree, "christoffel");
      read(t, "seed", c.christoffel.seed, "christoffel");
      check(c.christoffel.amplitude >= 0.0 && std::isfinite(c.christoffel.amplitude),
            "christoffel.amplitude must be finite and nonnegative");
      check(c.christoffel.degree >= 0 && c.christoffel.degree <= 8, "christoffel.degree must lie in [0, 8]");
    }
  }
  if (j.contains("sigma")) c.sigma = DiffusionCoeff::from_json(j.at("sigma"));
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    only_keys(s, "solver", {"r0", "lambda", "picard_tol", "max_iters", "lambda_cap", "probe_iters",
                            "enforce_ball", "glue_tol", "centers", "data"});
    read(s, "r0", c.r0, "solver");
    if (s.contains("lambda") && !s.at("lambda").is_null()) {
      double l = 0.0;
      read(s, "lambda", l, "solver");
      c.lambda = l;
    }
    read(s, "picard_tol", c.picard_tol, "solver");
    read(s, "max_iters", c.max_iters, "solver");
    read(s, "lambda_cap", c.lambda_cap, "solver");
    read(s, "probe_iters", c.probe_iters, "solver");
    read(s, "enforce_ball", c.enforce_ball, "solver");
    read(s, "glue_tol", c.glue_tol, "solver");
    read(s, "centers", c.centers, "solver");
    if (s.contains("data")) {
      const json& d = s.at("data");
      only_keys(d, "solver.data", {"amp0", "amp1", "x0", "width"});
      read_pair(d, "amp0", c.data.amp0, "solver.data");
      read_pair(d, "amp1", c.data.amp1, "solver.data");
      read_pair(d, "x0", c.data.x0, "solver.data");
      read(d, "width", c.data.width, "solver.data");
      check(c.data.width > 0.0, "solver.data.width must be positive");
    }
    check(c.glue_tol > 0.0, "solver.glue_tol must be positive");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"dir", "workers", "ensemble"});
    read(o, "dir", c.out_dir, "output");
    read(o, "workers", c.workers, "output");
    read(o, "ensemble", c.ensemble, "output");
    check(c.workers >= 1, "output.workers must be at least 1");
    check(c.ensemble >= 1, "output.ensemble must be at least 1");
  }
  if (j.contains("base_seed")) {
    std::uint64_t seed = 0;
    read(j, "base_seed", seed, "root");
    c.base_seed = seed;
  }
  // Range checks shared with the solver.
  c.solver_config().validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["grid"] = {{"half_width", half_width}, {"points", points}};
  j["hurst"] = {{"h1", hurst.h1}, {"h2", hurst.h2}};
  j["norms"] = {{"s", norms.s}, {"delta", norms.delta}, {"family", to_string(norms.family)}};
  if (christoffel.explicit_table)
    j["christoffel"] = christoffel.explicit_table->to_json();
  else
    j["christoffel"] = {{"amplitude", christoffel.amplitude},
                        {"degree", christoffel.degree},
                        {"seed", christoffel.seed}};
  j["sigma"] = sigma.to_json();
  j["solver"] = {{"r0", r0},
                 {"lambda", lambda ? json(*lambda) : json(nullptr)},
                 {"picard_tol", picard_tol},
                 {"max_iters", max_iters},
                 {"lambda_cap", lambda_cap},
                 {"probe_iters", probe_iters},
                 {"enforce_ball", enforce_ball},
                 {"glue_tol", glue_tol},
                 {"centers", centers},
                 {"data", {{"amp0", data.amp0}, {"amp1", data.amp1}, {"x0", data.x0}, {"width", data.width}}}};
  j["output"] = {{"dir", out_dir}, {"workers", workers}, {"ensemble", ensemble}};
  if (base_seed) j["base_seed"] = *base_seed;
  return j;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig s;
  s.s = norms.s;
  s.delta = norms.delta;
  s.hurst = hurst;
  s.lambda = lambda.value_or(1.0);
  s.r0 = r0;
  s.grid = Grid2(half_width, points);
  s.picard_tol = picard_tol;
  s.max_iters = max_iters;
  s.seed = base_seed.value_or(0);
  s.lambda_cap = lambda_cap;
  s.probe_iters = probe_iters;
  s.enforce_ball = enforce_ball;
  return s;
}

std::uint64_t RunConfig::require_seed() const {
  if (!base_seed) throw ConfigError("base_seed is required for stochastic subcommands");
  return *base_seed;
}

}  // namespace sgwe
