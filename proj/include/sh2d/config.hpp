// Run configuration: strict JSON parsing (unknown keys rejected) and
// cross-field validation, performed before any compute.
#pragma once

#include "sh2d/evolve.hpp"
#include "sh2d/groundstate.hpp"
#include "sh2d/potential.hpp"
#include "sh2d/specfun.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

namespace sh2d {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PotentialConfig {
  std::string kind;           // riesz | gaussian | bump | table
  double eta = 0.0;           // riesz
  double sigma = 0.0;         // gaussian
  double radius = 0.0;        // bump
  std::vector<double> samples;  // table
  double p1 = 0.0, p2 = 0.0;  // 0 = kind default

  Potential build(const GridSpec& g) const {
    if (kind == "riesz") return make_riesz(eta, g, p1, p2);
    if (kind == "gaussian")
      return make_gaussian(sigma, g, p1 > 0.0 ? p1 : 2.0, p2 > 0.0 ? p2 : 2.0);
    if (kind == "bump")
      return make_bump(radius, g, p1 > 0.0 ? p1 : 1.0, p2 > 0.0 ? p2 : 1.0);
    if (kind == "table")
      return make_table(samples, g, p1 > 0.0 ? p1 : 2.0, p2 > 0.0 ? p2 : 2.0);
    throw ConfigError("potential.kind must be riesz|gaussian|bump|table");
  }
};

struct RunConfig {
  GridSpec grid{40.0, 256};
  double alpha = 0.0;
  double lambda = 2.0;
  PotentialConfig potential;
  SolveConfig solver;
  EvolutionConfig evolution;
  std::string initial = "gaussian";  // evolve datum: gaussian|file|groundstate-output
  std::string initial_file;
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  nlohmann::json echo;  // verbatim parsed config, for reproducible metadata
};

namespace detail {

inline void reject_unknown(const nlohmann::json& obj, const std::string& where,
                           std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError("unknown key \"" + where + it.key() + "\"");
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  RunConfig c;
  c.echo = j;
  detail::reject_unknown(j, "",
                         {"grid", "alpha", "lambda", "potential", "solver",
                          "evolution", "initial", "initial_file", "seed",
                          "output_dir"});
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    detail::reject_unknown(g, "grid.", {"L", "N"});
    const double L = g.value("L", 40.0);
    const int N = g.value("N", 256);
    if (!(L > 0.0)) throw ConfigError("grid.L must be positive");
    if (N < 16 || N % 2 != 0) throw ConfigError("grid.N must be even and >= 16");
    c.grid = GridSpec(L, N);
  }
  c.alpha = j.value("alpha", 0.0);
  c.lambda = j.value("lambda", 2.0);
  if (!(c.lambda > -e_alpha(c.alpha)))
    throw ConfigError("lambda must exceed |e_alpha|");

  if (j.contains("potential")) {
    const auto& p = j.at("potential");
    detail::reject_unknown(
        p, "potential.",
        {"kind", "eta", "sigma", "radius", "samples", "p1", "p2"});
    c.potential.kind = p.value("kind", "");
    c.potential.eta = p.value("eta", 0.0);
    c.potential.sigma = p.value("sigma", 0.0);
    c.potential.radius = p.value("radius", 0.0);
    c.potential.p1 = p.value("p1", 0.0);
    c.potential.p2 = p.value("p2", 0.0);
    if (p.contains("samples"))
      c.potential.samples = p.at("samples").get<std::vector<double>>();
  } else {
    throw ConfigError("missing required block \"potential\"");
  }

  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    detail::reject_unknown(s, "solver.", {"tol", "max_iter", "symmetrize_every"});
    c.solver.tol = s.value("tol", 1e-6);
    c.solver.max_iter = s.value("max_iter", 20000);
    c.solver.symmetrize_every = s.value("symmetrize_every", 10);
    if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
    if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
    if (c.solver.symmetrize_every < 1)
      throw ConfigError("solver.symmetrize_every must be >= 1");
  }
  c.solver.lambda = c.lambda;

  if (j.contains("evolution")) {
    const auto& e = j.at("evolution");
    detail::reject_unknown(e, "evolution.", {"theta", "dt", "T", "record_every"});
    c.evolution.theta = e.value("theta", 1);
    c.evolution.dt = e.value("dt", 1e-3);
    c.evolution.T = e.value("T", 1.0);
    c.evolution.record_every = e.value("record_every", 10);
    try {
      c.evolution.validate();
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }

  c.initial = j.value("initial", "gaussian");
  c.initial_file = j.value("initial_file", "");
  if (c.initial != "gaussian" && c.initial != "file" &&
      c.initial != "groundstate-output")
    throw ConfigError("initial must be gaussian|file|groundstate-output");
  if (c.initial == "file" && c.initial_file.empty())
    throw ConfigError("initial_file is required when initial = file");
  c.seed = j.value("seed", std::uint64_t{1});
  c.output_dir = j.value("output_dir", ".");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace sh2d
