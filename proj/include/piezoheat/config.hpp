#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "piezoheat/timestep.hpp"

namespace piezoheat {

/// Full run description; everything a command needs to be reproducible.
struct RunConfig {
  MaterialParams material;
  double alpha = 0.5;
  double eta = 1.0;
  int n_heat = 20;
  int n_beam = 40;
  int k_xi = 24;
  double xi_max = 0.0; ///< 0 = automatic tail-bound cutoff
  SimConfig sim;
  std::string out_dir = "out";
  std::uint64_t seed = 1;

  FractionalParams fractional() const { return FractionalParams::make(alpha, eta); }
  Grid grid() const;
  void validate() const;

  /// Flat section.key representation (the config file grammar and the
  /// echoed form inside reports use the same keys).
  std::map<std::string, std::string> to_kv() const;
  static RunConfig from_kv(const std::map<std::string, std::string>& kv);
};

/// Named presets: zero, standard-a03, standard-a05, standard-a07,
/// heat-only, beam-only.
RunConfig preset_config(const std::string& name);

/// Parse the sectioned key=value format ('#' comments). Errors carry the
/// offending line number and key.
std::map<std::string, std::string> parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// Apply key=value overrides (section.key form) on top of cfg.
void apply_kv(RunConfig& cfg, const std::map<std::string, std::string>& kv);

} // namespace piezoheat
