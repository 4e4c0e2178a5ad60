#pragma once

// Run configuration: one JSON document with the sections problem, grid,
// solver, evolution and sweep. Unknown keys and type mismatches are errors
// that name the offending field.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "solwave/error.hpp"
#include "solwave/evolution.hpp"
#include "solwave/functionals.hpp"
#include "solwave/solver.hpp"

namespace solwave {

struct RunConfig {
  std::string symbol;
  std::string nonlinearity = "quadratic";
  double ballRadius = 1.0;

  double period = 0.0;  // 0 = adapted to mu
  int points = 0;

  double mu = 1e-3;
  double tolResidual = 1e-9;
  int maxIter = 50000;
  StepPolicy step;
  bool penalized = false;
  std::string seed = "kdv-scaled";
  std::string seedFile;
  int polarity = 0;
  bool precondition = true;

  EvolutionConfig evolution;
  std::vector<double> perturbationScales{0.005, 0.01, 0.02};
  std::uint64_t randomSeed = 42;

  std::vector<double> muList{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  double tau = 0.9;

  Problem problem() const {
    return makeProblem(symbolByName(symbol), nonlinearityByName(nonlinearity), ballRadius);
  }

  SolveConfig solveConfig() const {
    SolveConfig c;
    c.mu = mu;
    c.period = period;
    c.points = points;
    c.tolResidual = tolResidual;
    c.maxIter = maxIter;
    c.step = step;
    if (penalized) c.penalization = Penalization(ballRadius);
    c.seed = seed == "file" ? SeedKind::File : SeedKind::KdvScaled;
    c.polarity = polarity;
    c.precondition = precondition;
    return c;
  }
};

namespace detail {

class Section {
 public:
  Section(const nlohmann::json& doc, std::string name) : name_(std::move(name)) {
    if (doc.contains(name_)) {
      node_ = doc.at(name_);
      if (!node_.is_object()) fail(name_, "must be an object");
    } else {
      node_ = nlohmann::json::object();
    }
  }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail(name_ + "." + key, "has the wrong type");
    }
  }

  template <class T>
  void require(const std::string& key, T& out) {
    if (!node_.contains(key)) fail(name_ + "." + key, "is required");
    get(key, out);
  }

  void finish() const {
    for (const auto& item : node_.items())
      if (!seen_.count(item.key())) fail(name_ + "." + item.key(), "is not a recognised key");
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ConfigError, "config field '" + field + "' " + what);
  }

 private:
  std::string name_;
  nlohmann::json node_;
  std::set<std::string> seen_;
};

}  // namespace detail

/// Parses and validates a configuration document.
inline RunConfig parseConfig(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
  static const std::set<std::string> sections{"problem", "grid", "solver", "evolution", "sweep"};
  for (const auto& item : doc.items())
    if (!sections.count(item.key()))
      detail::Section::fail(item.key(), "is not a recognised section");

  RunConfig c;
  detail::Section problem(doc, "problem");
  problem.require("symbol", c.symbol);
  problem.get("nonlinearity", c.nonlinearity);
  problem.get("ballRadius", c.ballRadius);
  problem.finish();

  detail::Section grid(doc, "grid");
  grid.get("period", c.period);
  grid.get("points", c.points);
  grid.finish();

  detail::Section solver(doc, "solver");
  solver.get("mu", c.mu);
  solver.get("tolResidual", c.tolResidual);
  solver.get("maxIter", c.maxIter);
  solver.get("initialStep", c.step.initialStep);
  solver.get("shrink", c.step.shrink);
  solver.get("sufficientDecrease", c.step.sufficientDecrease);
  solver.get("penalized", c.penalized);
  solver.get("seed", c.seed);
  solver.get("seedFile", c.seedFile);
  solver.get("polarity", c.polarity);
  solver.get("precondition", c.precondition);
  solver.finish();

  detail::Section evolution(doc, "evolution");
  std::string integrator = "ifrk4";
  evolution.get("dt", c.evolution.dt);
  evolution.get("T", c.evolution.T);
  evolution.get("integrator", integrator);
  evolution.get("dealias", c.evolution.dealias);
  evolution.get("stride", c.evolution.stride);
  evolution.get("perturbationScales", c.perturbationScales);
  evolution.get("randomSeed", c.randomSeed);
  evolution.finish();

  detail::Section sweep(doc, "sweep");
  sweep.get("muList", c.muList);
  sweep.get("tau", c.tau);
  sweep.finish();

  using detail::Section;
  if (integrator == "ifrk4")
    c.evolution.integrator = Integrator::IFRK4;
  else if (integrator == "rk4")
    c.evolution.integrator = Integrator::RK4;
  else
    Section::fail("evolution.integrator", "must be \"ifrk4\" or \"rk4\"");
  if (!(c.mu > 0.0)) Section::fail("solver.mu", "must be positive");
  if (!(c.tolResidual > 0.0)) Section::fail("solver.tolResidual", "must be positive");
  if (c.maxIter < 1) Section::fail("solver.maxIter", "must be at least 1");
  if (!(c.step.shrink > 0.0 && c.step.shrink < 1.0)) Section::fail("solver.shrink", "must lie in (0, 1)");
  if (!(c.step.initialStep > 0.0)) Section::fail("solver.initialStep", "must be positive");
  if (c.seed != "kdv-scaled" && c.seed != "file") Section::fail("solver.seed", "must be \"kdv-scaled\" or \"file\"");
  if (c.seed == "file" && c.seedFile.empty()) Section::fail("solver.seedFile", "is required when seed is \"file\"");
  if (c.polarity < -1 || c.polarity > 1) Section::fail("solver.polarity", "must be -1, 0 or 1");
  if (!(c.ballRadius > 0.0)) Section::fail("problem.ballRadius", "must be positive");
  if (c.period < 0.0) Section::fail("grid.period", "must be non-negative");
  if (c.period > 0.0 && !PeriodicGrid::validSize(c.points))
    Section::fail("grid.points", "must be a power of two >= 16 when grid.period is set");
  if (c.period == 0.0 && c.points != 0) Section::fail("grid.points", "needs grid.period");
  if (!(c.evolution.dt > 0.0)) Section::fail("evolution.dt", "must be positive");
  if (!(c.evolution.T > 0.0)) Section::fail("evolution.T", "must be positive");
  if (c.evolution.stride < 1) Section::fail("evolution.stride", "must be at least 1");
  for (double s : c.perturbationScales)
    if (!(s > 0.0 && s <= 0.1)) Section::fail("evolution.perturbationScales", "entries must lie in (0, 0.1]");
  if (c.muList.empty()) Section::fail("sweep.muList", "must not be empty");
  for (std::size_t i = 0; i < c.muList.size(); ++i)
    if (!(c.muList[i] > 0.0) || (i > 0 && !(c.muList[i] > c.muList[i - 1])))
      Section::fail("sweep.muList", "must be positive and strictly ascending");
  if (!(c.tau < 1.0)) Section::fail("sweep.tau", "must be below 1");
  try {
    (void)c.problem();
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config field 'problem' is invalid: ") + e.what());
  }
  return c;
}

inline RunConfig parseConfigText(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
  }
  return parseConfig(doc);
}

inline RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseConfigText(buf.str());
}

}  // namespace solwave
