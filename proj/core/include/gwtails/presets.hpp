#pragma once

#include <string>
#include <vector>

#include "gwtails/errors.hpp"
#include "gwtails/pgf.hpp"

namespace gwt {

/// Built-in worked examples with their per-model tuning: kappa scaling a,
/// Fourier shift y, left-tail terms and harmonics.
struct Preset {
  std::string name;
  std::vector<double> p, q;
  double kappa_scale;
  double y_shift;
  int left_terms;
  int harmonics;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"example1", {0, 1, 1}, {3, -1}, 1.0 / 5.3, 2.9, 30, 50},
      {"example2", {0, 4, 4}, {9, 0, -1}, 1.0 / 4.1, 4.0, 40, 60},
      {"example3", {0, 2}, {6, -5, 1}, 1.0 / 2.0, 3.0, 30, 50},
  };
  return table;
}

inline const Preset& preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ValidationError("cli", "preset", "unknown preset " + name +
                                             " (expected example1, example2, example3)");
}

inline RationalPGF preset_model(const std::string& name) {
  const Preset& p = preset(name);
  return RationalPGF::from_coeffs(p.p, p.q);
}

}  // namespace gwt
