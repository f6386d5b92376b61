#pragma once

// Molecule presets and the key = value configuration format used to load
// them. One section per molecule:
//
//   [CO2]
//   rotational_constant_b = 0.3902        ; cm^-1
//   centrifugal_constant_d = 1.33e-7      ; cm^-1
//   polarizability_anisotropy = 2.1006    ; angstrom^3
//   dipole_moment = 0                     ; debye
//   spin_weight_even = 1
//   spin_weight_odd = 0

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotalign/rotor_core.hpp"

namespace rotalign {

/// Polarizability anisotropy (angstrom^3) for which `intensity` (TW/cm^2)
/// produces the dimensionless ramp strength `gamma`.
inline double calibrated_polarizability(double b_cm_inv, double intensity, double gamma) {
  // gamma = E^2 da / 4B with E^2 = 2I/(eps0 c) and da = 4 pi eps0 V
  //       = 2 pi I V / (c B)
  const double b = units::wavenumber_to_joule(b_cm_inv);
  const double i_si = units::tw_per_cm2_to_si(intensity);
  return gamma * units::kSpeedOfLight * b / (2.0 * units::kPi * i_si) / units::kAngstrom3;
}

namespace presets {

// CO2: anisotropy fixed by the anchor 2.5 TW/cm^2 <-> gamma = 142.
inline RotorSpec co2() {
  RotorSpec s;
  s.label = "CO2";
  s.rotational_constant_b = 0.3902;
  s.centrifugal_constant_d = 1.33e-7;
  s.polarizability_anisotropy = calibrated_polarizability(0.3902, 2.5, 142.0);
  s.dipole_moment = 0.0;
  s.spin_weight_even = 1.0;
  s.spin_weight_odd = 0.0;
  return s;
}

// KCl: B chosen so that T_rot = 128 ps.
inline RotorSpec kcl() {
  RotorSpec s;
  s.label = "KCl";
  s.rotational_constant_b = 0.1303;
  s.centrifugal_constant_d = 3.6e-8;
  s.polarizability_anisotropy = 3.0;
  s.dipole_moment = 10.27;
  s.spin_weight_even = 1.0;
  s.spin_weight_odd = 1.0;
  return s;
}

// 16O2 ground state: only odd rotational levels exist.
inline RotorSpec o2() {
  RotorSpec s;
  s.label = "O2";
  s.rotational_constant_b = 1.4377;
  s.centrifugal_constant_d = 4.84e-6;
  s.polarizability_anisotropy = 1.1;
  s.dipole_moment = 0.0;
  s.spin_weight_even = 0.0;
  s.spin_weight_odd = 1.0;
  return s;
}

inline RotorSpec n2() {
  RotorSpec s;
  s.label = "N2";
  s.rotational_constant_b = 1.9896;
  s.centrifugal_constant_d = 5.76e-6;
  s.polarizability_anisotropy = 0.70;
  s.dipole_moment = 0.0;
  s.spin_weight_even = 2.0;
  s.spin_weight_odd = 1.0;
  return s;
}

inline std::vector<RotorSpec> builtin() { return {co2(), kcl(), o2(), n2()}; }

}  // namespace presets

/// Molecule table keyed by upper-cased label.
class MoleculeTable {
 public:
  MoleculeTable() {
    for (auto& s : presets::builtin()) add(std::move(s));
  }

  static MoleculeTable empty() {
    MoleculeTable t;
    t.table_.clear();
    return t;
  }

  void add(RotorSpec spec) {
    spec.validate();
    table_[key(spec.label)] = std::move(spec);
  }

  bool contains(const std::string& name) const { return table_.count(key(name)) != 0; }

  const RotorSpec& get(const std::string& name) const {
    auto it = table_.find(key(name));
    if (it == table_.end()) throw std::out_of_range("unknown molecule '" + name + "'");
    return it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : table_) out.push_back(v.label);
    return out;
  }

  /// Parse sections from a key = value stream; entries override same-named presets.
  void load(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    pt::ini_parser::read_ini(in, tree);
    for (const auto& [section, body] : tree) {
      if (body.empty())
        throw std::runtime_error("molecule file: key '" + section + "' outside a [section]");
      RotorSpec s;
      s.label = section;
      for (const auto& [k, v] : body) {
        const auto value = parse_number(section, k, v.data());
        if (k == "rotational_constant_b") s.rotational_constant_b = value;
        else if (k == "centrifugal_constant_d") s.centrifugal_constant_d = value;
        else if (k == "polarizability_anisotropy") s.polarizability_anisotropy = value;
        else if (k == "dipole_moment") s.dipole_moment = value;
        else if (k == "spin_weight_even") s.spin_weight_even = value;
        else if (k == "spin_weight_odd") s.spin_weight_odd = value;
        else throw std::runtime_error("molecule file: [" + section + "] unknown key '" + k + "'");
      }
      add(std::move(s));
    }
  }

  void load_string(const std::string& text) {
    std::istringstream in(text);
    load(in);
  }

 private:
  static std::string key(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
  }

  static double parse_number(const std::string& section, const std::string& k, std::string text) {
    // ini_parser keeps inline comments; strip them.
    if (auto pos = text.find(';'); pos != std::string::npos) text.resize(pos);
    std::istringstream in(text);
    double v = 0.0;
    if (!(in >> v))
      throw std::runtime_error("molecule file: [" + section + "] " + k + " is not a number");
    return v;
  }

  std::map<std::string, RotorSpec> table_;
};

}  // namespace rotalign
