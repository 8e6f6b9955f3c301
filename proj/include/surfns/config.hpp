#pragma once

// Flat key = value run configuration with dotted keys, e.g.
//
//   name = free_decay_l2
//   geometry.kind = sphere
//   L = 16
//   nu.value = 1
//   forcing.tag = zero
//   init.modes = 2,0:1.0
//   time.dt = 1e-3
//   check.eigen_decay = 1e-6
//
// Lines starting with '#' are comments. Unknown keys and malformed values are
// rejected with the key path and line number.

#include "surfns/diagnostics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace surfns {

struct ModeAmp {
  int l = 0;
  int m = 0;  // negative m selects the sine slot
  double amp = 0.0;
};

enum class InitKind { Modes, Random };

struct CheckSpec {
  std::string name;
  double threshold = 0.0;
};

struct Scenario {
  std::string name = "unnamed";
  std::string claims;
  SurfaceKind kind = SurfaceKind::Sphere;
  double R = 1.0;
  double r = 0.4;      // torus minor radius
  int torus_n = 64;    // torus grid points per direction
  int L = 8;
  // nu(x) = value + a x3 / R
  double nu_value = 1.0;
  double nu_a = 0.0;
  ForcingTag forcing = ForcingTag::Zero;
  int forcing_sign = 1;
  std::vector<ModeAmp> forcing_field;
  Eigen::Vector3d forcing_point = Eigen::Vector3d(0, 0, 1);
  double forcing_c = 1.0;
  int forcing_axis = 1;
  InitKind init = InitKind::Modes;
  std::vector<ModeAmp> init_modes;
  Eigen::Vector3d init_alpha = Eigen::Vector3d::Zero();  // added as sum alpha_j v_j
  double init_uk = 0.0;   // random init: |u_K(0)|
  double init_unk = 1.0;  // random init: |u_NK(0)|
  StepperConfig stepper;
  bool convection = true;
  FitWindow fit;
  // paired runs: second trajectory starts at u0 + delta * (unit random direction)
  std::vector<double> pair_deltas;
  int members = 0;  // ensemble size (0: single run)
  std::vector<int> korn_truncations;
  int killing_K = 8;  // Fourier / harmonic degree of the strain-kernel count
  std::uint64_t seed = 1;
  std::vector<CheckSpec> checks;
  std::uint32_t config_hash = 0;  // CRC32 of the normalized key = value text
};

/// `origin` names the source in error messages.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<config>");
Scenario load_scenario_file(const std::string& path);

/// Names of the checks a config may declare, with one-line descriptions.
const std::vector<std::pair<std::string, std::string>>& known_checks();

double nu_lower_bound(const Scenario& s);

}  // namespace surfns
