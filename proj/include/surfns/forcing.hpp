#pragma once

// Forcing catalog f(x, u) with declared structural hypotheses, and a Monte
// Carlo check of those hypotheses.
//
//   f1        = g                                  (fixed divergence-free field)
//   f2 (+/-)  = v +/- P_K u                        (v non-Killing)
//   f3 (+/-)  = +/- u
//   f4 (+/-)  = (I - P_K) u +/- P_K(|x - p| P_K u)  (chordal distance to p)
//   f5        = (I - P_K)(|x| u) - u
//   constant Killing: c v_j

#include "surfns/grid.hpp"
#include "surfns/harmonics.hpp"
#include "surfns/killing.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace surfns {

enum class ForcingTag { Zero, ConstantField, F2, F3, F4, F5, ConstantKilling };

const char* forcing_tag_name(ForcingTag tag);
ForcingTag parse_forcing_tag(const std::string& name);

/// Declared hypotheses. C3 bounds the Killing work, (C5, C6) the non-Killing
/// work; `extra` is the bound C5|u_NK|^2 + C6|u_NK| and `extra2` adds
/// C6|u_K|^2.
struct HypothesisFlags {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double C5 = 0.0;
  double C6 = 0.0;
  bool uk1 = true;
  bool nega = false;
  bool pos = false;
  bool extra = false;
  bool extra2 = false;
};

struct ForcingParams {
  int L = 0;
  int sign = +1;
  std::optional<SpectralState> field;  // f1 field g or f2 field v
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // f4
  double c = 1.0;                                   // constant Killing amplitude
  int axis = 1;                                     // constant Killing index, 1-based
};

struct ForcingSpec {
  ForcingTag tag = ForcingTag::Zero;
  int L = 0;
  int sign = +1;
  Eigen::VectorXd field;                            // toroidal slots (f1, f2, constant Killing)
  Eigen::Vector3d point = Eigen::Vector3d::Zero();  // f4
  Eigen::Matrix3d weight = Eigen::Matrix3d::Zero(); // f4: (|x - p| Phi_1j, Phi_1k)
  double c = 0.0;
  int axis = 0;
  HypothesisFlags flags;
  bool independent_of_u = false;
  bool affine = true;
};

/// Builds a catalog entry on the basis grid (the solver grid).
ForcingSpec make_catalog_forcing(ForcingTag tag, const ForcingParams& params, const KillingBasis& basis);

struct HypothesisReport {
  int samples = 0;
  double C1_hat = 0.0;
  double C2_hat = 0.0;
  double C5_hat = 0.0;
  double C6_hat = 0.0;
  double max_killing_work = 0.0;  // max over samples of (f_K(u), u)
  double min_killing_work = 0.0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

HypothesisReport hypothesis_check(const ForcingSpec& spec, const GridPtr& grid, const KillingBasis& basis,
                                  int n_samples, std::uint64_t seed);

}  // namespace surfns
