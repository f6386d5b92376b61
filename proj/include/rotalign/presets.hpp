#pragma once

// Figure-reproduction presets. Each preset is a list of configuration entries
// ("section.key" = value) in the same vocabulary as the recipe files.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rotalign {

struct FigurePreset {
  std::string name;
  std::string command;
  std::string description;
  std::string headline;  // expected result
  std::vector<std::pair<std::string, std::string>> entries;
};

inline const std::vector<FigurePreset>& figure_presets() {
  static const std::vector<FigurePreset> table = {
      {"fig1", "simulate", "CO2, T=0, impulsive kick zeta=11 on an adiabatic ramp gamma=142 truncated at the kick",
       "max <cos^2> ~ 0.993 at t_max ~ 0.0037 T_rot; target state N=13 overlap ~ 0.996",
       {{"run.molecule", "CO2"},
        {"pulse.gamma", "142"},
        {"pulse.zeta", "11"},
        {"pulse.tau_a", "2"},
        {"pulse.tau_k", "0"},
        {"ensemble.kt_over_b", "0"}}},
      {"fig1-lower", "simulate", "CO2, T=0, kick zeta=11 alone",
       "max <cos^2> ~ 0.92 (kick-only saturation)",
       {{"run.molecule", "CO2"},
        {"pulse.gamma", "0"},
        {"pulse.zeta", "11"},
        {"pulse.tau_k", "0"},
        {"ensemble.kt_over_b", "0"}}},
      {"fig2", "sweep", "CO2, T=0, max alignment over zeta in [0,25] x gamma in [0,400], adiabatic ramp",
       "optimum line gamma_opt ~ 7 zeta + 21; interior optimum for zeta >~ 3.8; a~0.20 b~1.2 c~0.053",
       {{"run.molecule", "CO2"},
        {"sweep.kind", "zeta_gamma"},
        {"sweep.zeta_grid", "0:25:1"},
        {"sweep.gamma_grid", "0:400:10"},
        {"sweep.fit", "true"},
        {"sweep.fit_zeta_min", "5"},
        {"sweep.fit_zeta_max", "22"},
        {"ensemble.kt_over_b", "0"}}},
      {"fig3", "sweep", "CO2, T=0, zeta=11, max alignment over ramp duration tau_a/T_rot x gamma",
       "'x' (T_rot/4, 142) ~ 0.994; '+' (T_rot/4, 297) ~ 0.995; long ramps -> 0.993",
       {{"run.molecule", "CO2"},
        {"sweep.kind", "tau_gamma"},
        {"sweep.tau_grid", "log:0.05:2:25"},
        {"sweep.gamma_grid", "0:400:10"},
        {"pulse.zeta", "11"},
        {"ensemble.kt_over_b", "0"}}},
      {"fig4", "shape", "CO2, T=0, 10 ps / 2.5 TW/cm^2 ramp + 200 fs / 25 TW/cm^2 kick through a 640-pixel SLM",
       "max <cos^2> ~ 0.992 (finite kick, full ramp, centrifugal distortion); ~5 mJ input at a 20 um spot",
       {{"run.molecule", "CO2"},
        {"shape.ia", "2.5"},
        {"shape.ik", "25"},
        {"shape.tau_a_fs", "10000"},
        {"shape.tau_k_fs", "200"},
        {"shape.pixels", "640"},
        {"shape.spot_um", "20"},
        {"ensemble.kt_over_b", "0"}}},
      {"thermal30K", "shape", "CO2 at 30 K, 10 ps / 10 TW/cm^2 ramp + 200 fs / 50 TW/cm^2 kick, 640 pixels",
       "max <cos^2> ~ 0.915",
       {{"run.molecule", "CO2"},
        {"shape.ia", "10"},
        {"shape.ik", "50"},
        {"shape.tau_a_fs", "10000"},
        {"shape.tau_k_fs", "200"},
        {"shape.pixels", "640"},
        {"shape.spot_um", "20"},
        {"ensemble.temp_kelvin", "30"}}},
      {"kcl-orient", "orient", "KCl, T=0, 140 kV/cm 1 ps half-cycle pulse on a 2 kV/cm 18 ps ramp",
       "max <cos theta> ~ 0.95",
       {{"run.molecule", "KCl"},
        {"orient.hcp_kv_cm", "140"},
        {"orient.tau_k_ps", "1"},
        {"orient.ramp_kv_cm", "2"},
        {"orient.tau_a_ps", "18"},
        {"ensemble.kt_over_b", "0"}}},
  };
  return table;
}

inline const FigurePreset& find_preset(const std::string& name) {
  const auto& t = figure_presets();
  auto it = std::find_if(t.begin(), t.end(), [&](const FigurePreset& p) { return p.name == name; });
  if (it == t.end()) throw std::out_of_range("unknown preset '" + name + "'");
  return *it;
}

}  // namespace rotalign
