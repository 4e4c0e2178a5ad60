// Command-line driver: solve, sweep, compare-kdv, evolve, stability,
// validate-symbol. Exit codes: 0 ok, 1 configuration or input, 2 model regime,
// 3 iteration or resolution failure. Errors are reported on stderr as JSON.

#include <fftw3.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "solwave/solwave.hpp"

namespace fs = std::filesystem;
using namespace solwave;
using Json = nlohmann::ordered_json;

namespace {

int exitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::MuTooLarge:
    case ErrorCode::SubcriticalSpeed:
    case ErrorCode::ExponentWindow:
    case ErrorCode::BallExit:
    case ErrorCode::OutOfDomain:
    case ErrorCode::InvalidSymbol:
    case ErrorCode::UnsupportedRegularity:
      return 2;
    case ErrorCode::MaxIter:
    case ErrorCode::NoConvergence:
    case ErrorCode::ResolutionLoss:
    case ErrorCode::Blowup:
    case ErrorCode::TailTooLarge:
      return 3;
    default:
      return 1;
  }
}

void reportError(const std::string& code, const std::string& message, int exit) {
  Json j;
  j["error"] = code;
  j["message"] = message;
  j["exit"] = exit;
  std::cerr << j.dump() << std::endl;
}

std::vector<double> parseList(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size())
      throw Error(ErrorCode::ConfigError, "flag " + flag + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::ConfigError, "flag " + flag + " is empty");
  return out;
}

struct Run {
  std::string command;
  std::vector<std::string> argv;
  fs::path out = ".";
  std::string configPath;
  Json configEcho = Json::object();
  Json overrides = Json::object();
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  RunConfig load() {
    if (configPath.empty()) throw Error(ErrorCode::ConfigError, "--config is required");
    const auto text = io::readFile(configPath);
    try {
      configEcho = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCode::ConfigError, std::string("config is not valid JSON: ") + e.what());
    }
    return parseConfigText(text);
  }

  void write(const std::string& name, const std::string& content) {
    io::writeAtomic(out / name, content);
    outputs.push_back(name);
  }

  void manifest(const Json& extra = Json::object()) {
    Json m;
    m["command"] = command;
    m["arguments"] = argv;
    m["configFile"] = configPath;
    m["config"] = configEcho;
    m["overrides"] = overrides;
    m["versions"] = {{"solwave", std::string(SOLWAVE_VERSION)},
                     {"fftw", std::string(fftw_version)},
                     {"compiler", std::string(__VERSION__)}};
    m["timings"] = {{"totalSeconds",
                     std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    for (const auto& item : extra.items()) m[item.key()] = item.value();
    m["outputs"] = outputs;
    io::writeAtomic(out / "manifest.json", io::dump(m));
  }
};

// Seed on the configured grid, or on the grid adapted to mu.
SpectralField initialGuess(const Problem& prob, const RunConfig& rc, double mu) {
  const auto ref = longWaveReference(prob, rc.polarity);
  const PeriodicGrid grid = rc.period > 0.0 ? PeriodicGrid(rc.period, rc.points) : gridForMu(prob, mu, ref);
  if (rc.seed == "file") {
    const auto seed = io::readProfileCsv(rc.seedFile);
    return seed.grid().sameAs(grid) ? seed : resampleToGrid(seed, grid);
  }
  return longWaveSeed(prob, mu, grid, ref);
}

WaveProfile solveAt(const Problem& prob, const RunConfig& rc, double mu, bool penalized) {
  RunConfig local = rc;
  local.mu = mu;
  local.penalized = penalized;
  const auto guess = initialGuess(prob, local, mu);
  SolveConfig cfg = local.solveConfig();
  cfg.period = guess.grid().period();
  cfg.points = guess.size();
  return minimizeConstrained(prob, cfg, guess);
}

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return stem + "_" + buf + ext;
}

int cmdSolve(Run& run, std::optional<double> mu, bool penalized) {
  RunConfig rc = run.load();
  if (mu) {
    rc.mu = *mu;
    run.overrides["mu"] = *mu;
  }
  if (penalized) run.overrides["penalized"] = true;
  const auto prob = rc.problem();
  const auto w = solveAt(prob, rc, rc.mu, rc.penalized || penalized);
  run.write("profile.csv", io::profileCsv(w.field));
  run.write("meta.json", io::dump(io::profileMeta(w)));
  run.manifest();
  std::printf("mu=%.6g nu=%.12g residual=%.3e iterations=%d\n", w.mu, w.nu, w.residual, w.iterations);
  return 0;
}

int cmdSweep(Run& run, const std::string& muList, std::optional<double> tau) {
  RunConfig rc = run.load();
  if (!muList.empty()) {
    rc.muList = parseList(muList, "--mu-list");
    run.overrides["muList"] = rc.muList;
  }
  if (tau) {
    rc.tau = *tau;
    run.overrides["tau"] = *tau;
  }
  const auto prob = rc.problem();
  SolveConfig base = rc.solveConfig();
  base.period = 0.0;
  base.points = 0;
  const auto sweep = continuationSweep(prob, rc.muList, base);

  std::vector<ScalingDiagnostics> diag;
  for (std::size_t i = 0; i < sweep.entries.size(); ++i) {
    const auto& e = sweep.entries[i];
    if (!e.profile) continue;
    diag.push_back(scalingDiagnostics(prob, *e.profile, rc.tau));
    run.write("profiles/" + indexed("profile", i, ".csv"), io::profileCsv(e.profile->field));
    run.write("profiles/" + indexed("meta", i, ".json"), io::dump(io::profileMeta(*e.profile)));
  }
  const auto cmp = convergenceStudy(prob, sweep);
  run.write("sweep.csv", io::sweepCsv(sweep));
  run.write("convergence.csv", io::convergenceCsv(cmp, diag));

  Json failures = Json::array();
  int worst = 0;
  for (const auto& e : sweep.entries) {
    if (e.profile) continue;
    failures.push_back({{"mu", e.mu}, {"error", std::string(toString(*e.errorCode))}, {"message", e.error}});
    worst = std::max(worst, exitCodeFor(*e.errorCode));
  }
  run.manifest({{"failures", failures}});
  for (std::size_t i = 0; i < cmp.size(); ++i)
    std::printf("mu=%.6g dist=%.4e speed_dev=%.4e energy_dev=%.4e\n", cmp[i].mu, cmp[i].alignedDistance,
                cmp[i].speedDeviation, cmp[i].energyDeviation);
  if (worst != 0) {
    reportError("SWEEP_PARTIAL", std::to_string(failures.size()) + " sweep entries failed", worst);
  }
  return worst;
}

int cmdCompare(Run& run, const fs::path& in, std::optional<double> tau) {
  RunConfig rc = run.load();
  if (tau) {
    rc.tau = *tau;
    run.overrides["tau"] = *tau;
  }
  const auto prob = rc.problem();
  const auto ref = reducedReference(prob, rc.polarity);
  const auto e = exponents(prob.symbol.jStar(), prob.nonlinearity.p());
  std::vector<LongWaveComparison> cmp;
  std::vector<ScalingDiagnostics> diag;
  for (std::size_t i = 0;; ++i) {
    const auto csv = in / "profiles" / indexed("profile", i, ".csv");
    const auto meta = in / "profiles" / indexed("meta", i, ".json");
    if (!fs::exists(csv)) break;
    Json m;
    try {
      m = Json::parse(io::readFile(meta));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::IoError, meta.string() + ": " + ex.what());
    }
    WaveProfile w{io::readProfileCsv(csv), m.at("mu").get<double>(), m.at("nu").get<double>(),
                  m.at("residual").get<double>(), m.at("energy").get<double>(),
                  m.value("symbol", std::string()), m.value("nonlinearity", std::string()),
                  m.value("iterations", 0), m.value("supercritical", false)};
    const auto c = compareLongWave(prob, w, ref);
    cmp.push_back(c);
    diag.push_back(scalingDiagnostics(prob, w, rc.tau));
    // mu^{-alpha} u(mu^{-beta} (x - shift)) next to the reference
    const auto down = scaleDown(w.mu, e, w.field, ref.field.grid());
    const auto aligned = shifted(down, -c.shift);
    io::Csv scaled({"x", "scaled", "reference"});
    for (int j = 0; j < aligned.size(); ++j) scaled.add({aligned.grid().node(j), aligned[j], ref.field[j]});
    run.write(indexed("scaled", i, ".csv"), scaled.str());
  }
  if (cmp.empty()) throw Error(ErrorCode::IoError, "no profiles found under " + (in / "profiles").string());
  run.write("convergence.csv", io::convergenceCsv(cmp, diag));
  run.manifest({{"input", in.string()}});
  for (const auto& c : cmp)
    std::printf("mu=%.6g dist=%.4e speed_dev=%.4e energy_dev=%.4e\n", c.mu, c.alignedDistance, c.speedDeviation,
                c.energyDeviation);
  return 0;
}

EvolutionConfig evolutionFrom(const RunConfig& rc, Run& run, std::optional<double> T, std::optional<double> dt) {
  EvolutionConfig ec = rc.evolution;
  if (T) {
    ec.T = *T;
    run.overrides["T"] = *T;
  }
  if (dt) {
    ec.dt = *dt;
    run.overrides["dt"] = *dt;
  }
  return ec;
}

int cmdEvolve(Run& run, const std::string& profilePath, std::optional<double> mu, std::optional<double> T,
              std::optional<double> dt) {
  RunConfig rc = run.load();
  if (mu) {
    rc.mu = *mu;
    run.overrides["mu"] = *mu;
  }
  const auto prob = rc.problem();
  const auto ec = evolutionFrom(rc, run, T, dt);
  SpectralField u0 = profilePath.empty() ? solveAt(prob, rc, rc.mu, rc.penalized).field
                                         : io::readProfileCsv(profilePath);
  if (!profilePath.empty()) run.overrides["profile"] = profilePath;
  int status = 0;
  EvolutionTrace trace;
  try {
    trace = evolve(prob, u0, ec, &u0, 0.0);
  } catch (const EvolutionError& err) {
    trace = err.trace();
    status = exitCodeFor(err.code());
    reportError(std::string(toString(err.code())), err.what(), status);
  }
  run.write("trace.csv", io::traceCsv(trace));
  if (trace.finalField) run.write("profile.csv", io::profileCsv(*trace.finalField));
  run.manifest();
  std::printf("T=%.6g max_Q_drift=%.3e max_E_drift=%.3e\n", trace.time.empty() ? 0.0 : trace.time.back(),
              trace.maxMomentumDrift(), trace.maxEnergyDrift());
  return status;
}

int cmdStability(Run& run, std::optional<double> mu, const std::string& scales, std::optional<std::uint64_t> seed,
                 std::optional<double> T, std::optional<double> dt) {
  RunConfig rc = run.load();
  if (mu) {
    rc.mu = *mu;
    run.overrides["mu"] = *mu;
  }
  if (!scales.empty()) {
    rc.perturbationScales = parseList(scales, "--scales");
    run.overrides["perturbationScales"] = rc.perturbationScales;
  }
  if (seed) {
    rc.randomSeed = *seed;
    run.overrides["randomSeed"] = *seed;
  }
  const auto prob = rc.problem();
  const auto ec = evolutionFrom(rc, run, T, dt);
  const auto w = solveAt(prob, rc, rc.mu, rc.penalized);
  io::Csv summary({"scale", "initial_dist", "max_dist", "ratio"});
  int status = 0;
  for (std::size_t i = 0; i < rc.perturbationScales.size(); ++i) {
    const double scale = rc.perturbationScales[i];
    const auto pert = randomPerturbation(w.field, scale, rc.randomSeed);
    EvolutionTrace trace;
    try {
      trace = stabilityExperiment(prob, w, pert, ec);
    } catch (const EvolutionError& err) {
      trace = err.trace();
      status = std::max(status, exitCodeFor(err.code()));
      reportError(std::string(toString(err.code())), err.what(), exitCodeFor(err.code()));
    }
    run.write(indexed("trace", i, ".csv"), io::traceCsv(trace));
    summary.add({scale, trace.initialDistance(), trace.maxOrbitDistance(), trace.distanceRatio()});
    std::printf("scale=%.4g initial=%.4e max=%.4e ratio=%.4f\n", scale, trace.initialDistance(),
                trace.maxOrbitDistance(), trace.distanceRatio());
  }
  run.write("stability.csv", summary.str());
  run.manifest({{"seeds", {{"randomSeed", rc.randomSeed}, {"generator", "splitmix64"}}}});
  return status;
}

int cmdValidate(Run& run, const std::string& name, double kMax, int samples, bool writeReport) {
  const auto symbol = symbolByName(name);
  const auto report = validateSymbol(symbol, kMax, samples);
  Json j;
  j["symbol"] = report.symbol;
  j["passed"] = report.ok();
  j["kCut"] = symbol.kCut();
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"check", c.name}, {"passed", c.passed}, {"violation", c.violation},
                      {"worstK", c.worstK}, {"worstValue", c.worstValue}, {"detail", c.detail}});
    std::printf("%-20s %s%s%s\n", c.name.c_str(), c.passed ? "pass" : "FAIL", c.passed ? "" : " ",
                c.violation.c_str());
  }
  j["checks"] = checks;
  if (writeReport) {
    run.write("report.json", io::dump(j));
    run.manifest({{"kMax", kMax}, {"samples", samples}});
  }
  std::printf("%s: %s\n", report.symbol.c_str(), report.ok() ? "pass" : "FAIL");
  if (!report.ok()) {
    const auto* bad = report.firstViolation();
    reportError("INVALID_SYMBOL", bad ? bad->name + ": " + bad->violation : "validation failed", 2);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solitary waves of Whitham-type equations"};
  app.require_subcommand(1);
  Run run;
  for (int i = 0; i < argc; ++i) run.argv.emplace_back(argv[i]);

  std::optional<double> mu, tau, T, dt;
  std::optional<std::uint64_t> seed;
  bool penalized = false;
  std::string muList, in, profile, scales, name;
  std::string out = ".";
  double kMax = 100.0;
  int samples = 20001;

  auto common = [&](CLI::App* sub, bool config) {
    if (config) sub->add_option("--config", run.configPath, "JSON configuration file")->required();
    sub->add_option("--out", out, "output directory");
  };

  auto* solve = app.add_subcommand("solve", "minimise E at fixed Q = mu");
  common(solve, true);
  solve->add_option("--mu", mu, "momentum");
  solve->add_flag("--penalized", penalized, "use the penalised functional");

  auto* sweep = app.add_subcommand("sweep", "continuation in mu with long-wave comparison");
  common(sweep, true);
  sweep->add_option("--mu-list", muList, "comma-separated ascending mu values");
  sweep->add_option("--tau", tau, "weight exponent of the scaling diagnostics");

  auto* compare = app.add_subcommand("compare-kdv", "rescale sweep profiles and compare with the long-wave limit");
  common(compare, true);
  compare->add_option("--in", in, "sweep output directory")->required();
  compare->add_option("--tau", tau, "weight exponent of the scaling diagnostics");

  auto* evolveCmd = app.add_subcommand("evolve", "time-evolve a profile");
  common(evolveCmd, true);
  evolveCmd->add_option("--profile", profile, "profile CSV (default: solve at --mu)");
  evolveCmd->add_option("--mu", mu, "momentum of the solved profile");
  evolveCmd->add_option("--T", T, "horizon");
  evolveCmd->add_option("--dt", dt, "time step");

  auto* stability = app.add_subcommand("stability", "evolve perturbed waves and track orbit distance");
  common(stability, true);
  stability->add_option("--mu", mu, "momentum");
  stability->add_option("--scales", scales, "comma-separated relative L2 perturbation sizes");
  stability->add_option("--seed", seed, "64-bit random seed");
  stability->add_option("--T", T, "horizon");
  stability->add_option("--dt", dt, "time step");

  auto* validate = app.add_subcommand("validate-symbol", "check a dispersion symbol against the model assumptions");
  validate->add_option("--name", name, "symbol name (whitham, gaussian, rational:s)")->required();
  validate->add_option("--kmax", kMax, "sampling half-width");
  validate->add_option("--samples", samples, "number of samples");
  auto* validateOut = validate->add_option("--out", out, "write report.json here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    reportError("CONFIG_ERROR", e.what(), 1);
    return 1;
  }

  run.out = out;
  try {
    if (*solve) {
      run.command = "solve";
      return cmdSolve(run, mu, penalized);
    }
    if (*sweep) {
      run.command = "sweep";
      return cmdSweep(run, muList, tau);
    }
    if (*compare) {
      run.command = "compare-kdv";
      return cmdCompare(run, in, tau);
    }
    if (*evolveCmd) {
      run.command = "evolve";
      return cmdEvolve(run, profile, mu, T, dt);
    }
    if (*stability) {
      run.command = "stability";
      return cmdStability(run, mu, scales, seed, T, dt);
    }
    run.command = "validate-symbol";
    return cmdValidate(run, name, kMax, samples, validateOut->count() > 0);
  } catch (const Error& e) {
    const int code = exitCodeFor(e.code());
    reportError(std::string(toString(e.code())), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    reportError("INTERNAL", e.what(), 1);
    return 1;
  }
}
