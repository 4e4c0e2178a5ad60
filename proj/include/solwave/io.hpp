#pragma once

// CSV and JSON output. Numbers are printed with %.17g so that identical runs
// give byte-identical files; every file is written to a temporary name and
// renamed into place.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "solwave/analysis.hpp"
#include "solwave/error.hpp"
#include "solwave/evolution.hpp"
#include "solwave/grid.hpp"
#include "solwave/solver.hpp"

namespace solwave::io {

inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void writeAtomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot move " + tmp + " to " + path.string() + ": " + ec.message());
}

inline std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Rows of comma-separated values; the first row holds the header.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : columns_(header.size()) { row(header); }

  Csv& add(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(num(v));
    return row(cells);
  }

  Csv& row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw Error(ErrorCode::InvalidArgument, "CSV row has the wrong width");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
    return *this;
  }

  const std::string& str() const { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

inline std::string profileCsv(const SpectralField& u) {
  Csv csv({"x", "u"});
  for (int j = 0; j < u.size(); ++j) csv.add({u.grid().node(j), u[j]});
  return csv.str();
}

/// Reads x,u rows written by profileCsv. The period is N times the node spacing.
inline SpectralField readProfileCsv(const std::filesystem::path& path) {
  std::istringstream in(readFile(path));
  std::string line;
  std::getline(in, line);
  if (line.rfind("x,u", 0) != 0) throw Error(ErrorCode::IoError, path.string() + ": expected header x,u");
  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::IoError, path.string() + ": malformed row");
    try {
      xs.push_back(std::stod(line.substr(0, comma)));
      us.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::IoError, path.string() + ": malformed number in '" + line + "'");
    }
  }
  if (xs.size() < 16) throw Error(ErrorCode::IoError, path.string() + ": too few rows");
  const double h = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  const PeriodicGrid grid(h * static_cast<double>(xs.size()), static_cast<int>(xs.size()));
  return SpectralField::fromSamples(grid, std::move(us));
}

inline nlohmann::ordered_json profileMeta(const WaveProfile& w) {
  nlohmann::ordered_json j;
  j["mu"] = w.mu;
  j["nu"] = w.nu;
  j["residual"] = w.residual;
  j["energy"] = w.energy;
  j["P"] = w.field.grid().period();
  j["N"] = w.field.size();
  j["iterations"] = w.iterations;
  j["supercritical"] = w.supercritical;
  j["symbol"] = w.symbolId;
  j["nonlinearity"] = w.nonlinearityId;
  return j;
}

inline std::string sweepCsv(const SweepResult& sweep) {
  Csv csv({"mu", "P", "N", "nu", "energy", "residual", "tail", "iters"});
  for (const auto& e : sweep.entries) {
    if (!e.profile) continue;
    const auto& w = *e.profile;
    csv.add({e.mu, e.grid.period(), static_cast<double>(e.grid.size()), w.nu, w.energy, w.residual, e.tail,
             static_cast<double>(w.iterations)});
  }
  return csv.str();
}

inline std::string convergenceCsv(const std::vector<LongWaveComparison>& cmp,
                                  const std::vector<ScalingDiagnostics>& diag) {
  if (cmp.size() != diag.size()) throw Error(ErrorCode::InvalidArgument, "comparison and diagnostic counts differ");
  Csv csv({"mu", "dist_aligned", "speed_dev", "energy_dev", "shift", "tau_ratio1", "tau_ratio2", "supnorm_ratio"});
  for (std::size_t i = 0; i < cmp.size(); ++i)
    csv.add({cmp[i].mu, cmp[i].alignedDistance, cmp[i].speedDeviation, cmp[i].energyDeviation, cmp[i].shift,
             diag[i].ratio1, diag[i].ratio2, diag[i].supnormRatio});
  return csv.str();
}

inline std::string traceCsv(const EvolutionTrace& tr) {
  Csv csv({"t", "E_drift", "Q_drift", "orbit_dist", "shift"});
  const bool ref = !tr.orbitDist.empty();
  for (std::size_t i = 0; i < tr.time.size(); ++i)
    csv.add({tr.time[i], tr.energyDrift[i], tr.momentumDrift[i], ref ? tr.orbitDist[i] : 0.0,
             ref ? tr.shift[i] : 0.0});
  return csv.str();
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace solwave::io
