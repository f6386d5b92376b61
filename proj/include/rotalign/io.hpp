#pragma once

// File formats: trace / contour / spectral / time-field CSVs with JSON
// manifests. Numbers are written in shortest round-trip form so identical
// runs give byte-identical files.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "rotalign/design_search.hpp"
#include "rotalign/observables.hpp"
#include "rotalign/pulses.hpp"
#include "rotalign/shaper.hpp"

namespace rotalign::io {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline std::string num(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

/// FNV-1a, used to tag outputs with the configuration that produced them.
inline std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

inline void write_json(const fs::path& path, const json& j) { open_out(path) << j.dump(2) << "\n"; }

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

// ---------------------------------------------------------------------------
// Traces

inline void write_trace_csv(const fs::path& path, const AlignmentTrace& trace) {
  auto out = open_out(path);
  out << "t_over_Trot,value\n";
  for (std::size_t i = 0; i < trace.times.size(); ++i)
    out << num(trace.times[i] / units::kRotationalPeriod) << "," << num(trace.values[i]) << "\n";
}

inline AlignmentTrace read_trace_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("t_over_Trot,value", 0) != 0) throw std::runtime_error(path.string() + ": bad header");
  AlignmentTrace t;
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": expected two columns");
    t.times.push_back(std::stod(line.substr(0, comma)) * units::kRotationalPeriod);
    t.values.push_back(std::stod(line.substr(comma + 1)));
  }
  return t;
}

inline json settings_json(const PropagationSettings& s) {
  return {{"tolerance", s.tolerance}, {"sample_dt_over_Trot", s.sample_dt / units::kRotationalPeriod}};
}

inline json ensemble_json(const ThermalEnsemble& e) {
  return {{"kt_over_b", e.normalized_temperature}, {"members", e.members.size()}, {"m_folded", e.folded}};
}

inline void write_trace_sidecar(const fs::path& path, const AlignmentTrace& trace, const PulseProgram& program,
                                const ThermalEnsemble& ensemble, const PropagationSettings& settings,
                                const TraceMaximum& maximum, json extra = json::object()) {
  json j;
  j["observable"] = to_string(trace.observable_kind);
  j["program"] = program_to_string(program);
  j["ensemble"] = ensemble_json(ensemble);
  j["settings"] = settings_json(settings);
  j["summary"] = {{"t_max_over_Trot", maximum.t_max / units::kRotationalPeriod}, {"max_value", maximum.value}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(path, j);
}

// ---------------------------------------------------------------------------
// Contours: <stem>.csv (matrix, rows = axis1), <stem>_axis1.csv, <stem>_axis2.csv, <stem>.json

inline json fit_json(const FitResult& f) {
  json j;
  j["model"] = to_string(f.model);
  if (f.model == FitModel::Line)
    j["parameters"] = {{"slope", f.parameters[0]}, {"intercept", f.parameters[1]}};
  else
    j["parameters"] = {{"a", f.parameters[0]}, {"b", f.parameters[1]}, {"c", f.parameters[2]}};
  j["residual_rms"] = f.residual_rms;
  j["fit_range"] = f.fit_range;
  if (f.threshold) j["threshold"] = *f.threshold;
  j["warnings"] = f.warnings;
  return j;
}

inline void write_axis(const fs::path& path, const Axis& a) {
  auto out = open_out(path);
  out << a.name << "\n";
  for (double v : a.values) out << num(v) << "\n";
}

inline void write_contour(const fs::path& dir, const std::string& stem, const ContourData& c,
                          const std::vector<FitResult>& fits = {}, json extra = json::object()) {
  {
    auto out = open_out(dir / (stem + ".csv"));
    for (Eigen::Index i = 0; i < c.values.rows(); ++i) {
      for (Eigen::Index j = 0; j < c.values.cols(); ++j) {
        if (j) out << ",";
        out << (std::isnan(c.values(i, j)) ? std::string("nan") : num(c.values(i, j)));
      }
      out << "\n";
    }
  }
  write_axis(dir / (stem + "_axis1.csv"), c.axis1);
  write_axis(dir / (stem + "_axis2.csv"), c.axis2);
  json j;
  j["values"] = "log10(1 - max <cos^2 theta>), rows follow axis1, columns axis2";
  j["matrix_file"] = stem + ".csv";
  j["axis1"] = {{"name", c.axis1.name}, {"units", c.axis1.units}, {"file", stem + "_axis1.csv"}};
  j["axis2"] = {{"name", c.axis2.name}, {"units", c.axis2.units}, {"file", stem + "_axis2.csv"}};
  j["kt_over_b"] = c.kt_over_b;
  j["fixed"] = c.fixed;
  j["model"] = c.model;
  json fails = json::array();
  for (const auto& f : c.failures) fails.push_back({{"row", f.row}, {"col", f.col}, {"message", f.message}});
  j["failures"] = fails;
  json fj = json::array();
  for (const auto& f : fits) fj.push_back(fit_json(f));
  j["fits"] = fj;
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(dir / (stem + ".json"), j);
}

// ---------------------------------------------------------------------------
// Spectral and time fields

inline void write_spectral(const fs::path& dir, const std::string& stem, const SpectralField& s,
                           json extra = json::object()) {
  {
    auto out = open_out(dir / (stem + ".csv"));
    out << "omega_rad_per_fs,amplitude,phase_rad\n";
    for (std::size_t k = 0; k < s.size(); ++k)
      out << num(s.omega(k)) << "," << num(s.amplitude[k]) << "," << num(s.phase[k]) << "\n";
  }
  json j;
  j["data_file"] = stem + ".csv";
  j["carrier_nm"] = s.carrier_nm;
  j["t0_fs"] = s.t0_fs;
  j["omega0_rad_per_fs"] = s.omega0;
  j["domega_rad_per_fs"] = s.domega;
  if (s.pixel_count) {
    j["pixelation"] = {{"pixel_count", *s.pixel_count},
                       {"window_rad_per_fs", {s.window->omega_lo, s.window->omega_hi}}};
  } else {
    j["pixelation"] = nullptr;
  }
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(dir / (stem + ".json"), j);
}

/// Reads a spectral CSV + manifest pair written by write_spectral.
inline SpectralField read_spectral(const fs::path& dir, const std::string& stem) {
  const auto j = read_json(dir / (stem + ".json"));
  SpectralField s;
  s.carrier_nm = j.at("carrier_nm").get<double>();
  s.t0_fs = j.at("t0_fs").get<double>();
  s.omega0 = j.at("omega0_rad_per_fs").get<double>();
  s.domega = j.at("domega_rad_per_fs").get<double>();
  if (!j.at("pixelation").is_null()) {
    s.pixel_count = j["pixelation"].at("pixel_count").get<int>();
    const auto w = j["pixelation"].at("window_rad_per_fs");
    s.window = SpectralWindow{w.at(0).get<double>(), w.at(1).get<double>()};
  }
  std::ifstream in(dir / (stem + ".csv"));
  if (!in) throw std::runtime_error("cannot read " + (dir / (stem + ".csv")).string());
  std::string line;
  std::getline(in, line);
  if (line != "omega_rad_per_fs,amplitude,phase_rad") throw std::runtime_error(stem + ".csv: bad header");
  int n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw std::runtime_error(stem + ".csv:" + std::to_string(n) + ": expected three columns");
    s.amplitude.push_back(std::stod(b));
    s.phase.push_back(std::stod(c));
  }
  return s;
}

/// Time field CSV (t_fs, re, im); `stride` > 1 thins the output.
inline void write_time_field(const fs::path& path, const TimeField& f, std::size_t stride = 1) {
  auto out = open_out(path);
  out << "t_fs,re,im\n";
  for (std::size_t n = 0; n < f.size(); n += std::max<std::size_t>(1, stride))
    out << num(f.time(n)) << "," << num(f.envelope[n].real()) << "," << num(f.envelope[n].imag()) << "\n";
}

}  // namespace rotalign::io
