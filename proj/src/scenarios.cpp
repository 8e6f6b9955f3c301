// Built-in scenario registry. Each entry is an ordinary config text, so
// `surfns scenario X` and `surfns run X.cfg` behave identically.

#include "surfns/errors.hpp"
#include "surfns/harness.hpp"

#include <utility>

namespace surfns {

namespace {

const std::vector<std::pair<std::string, std::string>>& registry() {
  static const std::vector<std::pair<std::string, std::string>> r = {
      {"free_decay_l2", R"(name = free_decay_l2
claims = unforced decay: a single degree-2 toroidal mode decays as exp(-nu lambda_2 t), |u_NK|^2 at rate 2 lambda_2; degree 1 is the Killing kernel
L = 16
nu.value = 1
forcing.tag = zero
init.modes = 2,0:1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 4
time.stride = 20
fit.t_min = 0.5
fit.t_max = 3
check.eigen_decay = 1e-6
check.lambda1_zero = 1e-10
check.decay_rate = 1e-3
check.omega_max = 1e-10
check.ledger = 1e-6
)"},
      {"nonkilling_decay", R"(name = nonkilling_decay
claims = with zero forcing the non-Killing component decays exponentially at rate at least 2 nu_* lambda_2 while the Killing component is conserved
L = 12
seed = 7
forcing.tag = zero
init.kind = random
init.uk = 0.5
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 3
time.stride = 10
fit.t_min = 1
fit.t_max = 2.5
check.decay_rate_min = 0.01
check.unk_decreasing = 0
check.killing_affine = 1e-10
check.ledger = 1e-6
)"},
      {"constant_killing_growth", R"(name = constant_killing_growth
claims = a constant unit Killing force makes (f_K, u_K) grow affinely with slope |f_K|^2 and, from rest, |u_K(t)|^2 = t^2 independently of u
L = 8
forcing.tag = constant_killing
forcing.c = 1
forcing.axis = 1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 2
time.stride = 50
check.killing_affine = 1e-8
check.fd_law = 1e-8
check.uk2 = 1e-6
check.ledger = 1e-6
)"},
      {"killing_conserved_f1", R"(name = killing_conserved_f1
claims = a u-independent force without Killing part (f_K = 0) leaves every Killing coefficient of the solution unchanged
L = 8
seed = 3
forcing.tag = f1
forcing.field = 2,0:1
init.kind = random
init.uk = 1
init.unk = 0.5
time.scheme = rk4
time.dt = 2e-3
time.t_end = 5
time.stride = 25
check.killing_affine = 1e-10
check.ledger = 1e-6
check.hypotheses = 0
)"},
      {"f3_minus_decay", R"(name = f3_minus_decay
claims = sign-conditioned case f_K(u) = -u_K: |u_K(t)| = exp(-t) |u_K(0)|, nonincreasing sample by sample
L = 8
seed = 11
forcing.tag = f3
forcing.sign = -1
init.kind = random
init.uk = 1
init.unk = 0.5
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 20
check.uk_exponential = 1e-6
check.uk_nonincreasing = 0
check.hypotheses = 0
check.ledger = 1e-6
)"},
      {"f3_plus_growth", R"(name = f3_plus_growth
claims = sign-conditioned case f_K(u) = +u_K: |u_K(t)| = exp(t) |u_K(0)|, nondecreasing sample by sample
L = 8
seed = 11
forcing.tag = f3
forcing.sign = 1
init.kind = random
init.uk = 1
init.unk = 0.5
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 20
check.uk_exponential = 1e-6
check.uk_nondecreasing = 0
check.hypotheses = 0
check.ledger = 1e-6
)"},
      {"variable_viscosity_energy", R"(name = variable_viscosity_energy
claims = energy balance with variable viscosity nu = 1 + 0.5 x3 / R: d/dt |u|^2 / 2 = -(2 nu eps(u), eps(u)) + (f, u) closes along the run
L = 16
seed = 5
nu.value = 1
nu.a = 0.5
forcing.tag = f2
forcing.sign = -1
forcing.field = 2,0:1; 3,1:0.5
init.kind = random
init.uk = 0.5
init.unk = 1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 10
check.ledger = 1e-6
check.hypotheses = 0
)"},
      {"bounded_f2_minus", R"(name = bounded_f2_minus
claims = instantaneous regularization: with a dissipative Killing response the solution stays uniformly bounded and u_K decays
L = 12
seed = 9
forcing.tag = f2
forcing.sign = -1
forcing.field = 2,0:1; 3,-2:0.5
init.kind = random
init.uk = 1
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 4
time.stride = 20
check.unk_bound = 1.5
check.uk_nonincreasing = 0
check.hypotheses = 0
check.ledger = 1e-6
)"},
      {"f4_minus_point", R"(name = f4_minus_point
claims = distance-weighted Killing damping f_K(u) = -P_K(|x - p| u_K) is dissipative on the Killing component
L = 8
seed = 13
forcing.tag = f4
forcing.sign = -1
forcing.point = 0, 0, 1
init.kind = random
init.uk = 1
init.unk = 0.5
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 20
check.uk_nonincreasing = 0
check.hypotheses = 0
check.ledger = 1e-6
)"},
      {"f5_radius2", R"(name = f5_radius2
claims = the f5 force on a sphere of radius 2 damps the Killing component and satisfies the dissipative hypotheses
L = 8
seed = 17
geometry.R = 2
forcing.tag = f5
init.kind = random
init.uk = 1
init.unk = 0.5
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 20
check.uk_nonincreasing = 0
check.hypotheses = 0
check.ledger = 1e-6
)"},
      {"nonkilling_decay_ensemble", R"(name = nonkilling_decay_ensemble
claims = attraction of bounded sets: over an ensemble of random data the largest |u_NK| decays monotonically at rate 2 nu_* lambda_2 and enters the absorbing ball sqrt(1/2 + omega)
L = 12
seed = 2024
ensemble.members = 8
forcing.tag = zero
init.kind = random
init.uk = 0
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 5
time.stride = 10
fit.t_min = 1.5
fit.t_max = 4
check.ens_decay_rate_min = 0.01
check.ens_omega_max = 1e-10
check.ens_unk_decreasing = 0
check.ens_entry_time = 5
)"},
      {"unbounded_attractor_f3_plus", R"(name = unbounded_attractor_f3_plus
claims = unbounded-attractor regime: under f_K(u) = +u_K the smallest |u_K| over the ensemble never decreases
L = 8
seed = 31
ensemble.members = 4
forcing.tag = f3
forcing.sign = 1
init.kind = random
init.uk = 1
init.unk = 1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1.5
time.stride = 25
check.ens_uk_nondecreasing = 0
check.uk_exponential = 1e-6
)"},
      {"killing_members_steady", R"(name = killing_members_steady
claims = Killing fields are steady states of the unforced flow: members starting in the Killing space keep every diagnostic constant
L = 8
seed = 41
ensemble.members = 4
forcing.tag = zero
init.kind = random
init.uk = 1
init.unk = 0
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 25
check.ens_constant = 1e-12
)"},
      {"backward_uniqueness_pair", R"(name = backward_uniqueness_pair
claims = backward uniqueness and no crossing: the difference of two nearby solutions never vanishes, Lambda stays finite and -log|w| / 2 is affine in (t, int Lambda)
L = 12
seed = 23
forcing.tag = f2
forcing.sign = -1
forcing.field = 2,1:1; 4,0:0.5
init.kind = random
init.uk = 0.5
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 2
time.stride = 10
pair.deltas = 1e-2
check.no_crossing = 0
check.lambda_affine = 0.05
)"},
      {"continuous_dependence", R"(name = continuous_dependence
claims = continuous dependence on initial data: the constant in sup_t |w|^2 + int 2 nu |eps(w)|^2 <= C |w(0)|^2 is the same for initial gaps of 1e-2, 1e-3 and 1e-4
L = 12
seed = 29
forcing.tag = f2
forcing.sign = -1
forcing.field = 2,1:1; 4,0:0.5
init.kind = random
init.uk = 0.5
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 1
time.stride = 10
pair.deltas = 1e-2, 1e-3, 1e-4
check.contdep_spread = 2
)"},
      {"korn_sphere", R"(name = korn_sphere
claims = Killing fields have zero strain; the Korn constant C_P on non-Killing divergence-free fields is resolved and the Korn inequality holds
geometry.kind = sphere
L = 32
seed = 37
killing.K = 6
korn.truncations = 16, 32
check.killing_residual = 1e-9
check.killing_dim = 0
check.korn_stable = 0.01
check.korn_inequality = 1e-8
)"},
      {"killing_torus", R"(name = killing_torus
claims = on the axisymmetric torus the Killing space is one-dimensional (rotation about the axis) and the rotation has zero strain
geometry.kind = torus
geometry.R = 1
geometry.r = 0.4
geometry.n = 64
killing.K = 8
check.killing_residual = 1e-9
check.killing_dim = 0
)"},
  };
  return r;
}

}  // namespace

std::vector<std::string> list_scenarios() {
  std::vector<std::string> out;
  for (const auto& [name, text] : registry()) out.push_back(name);
  return out;
}

std::string builtin_scenario_text(const std::string& name) {
  for (const auto& [n, text] : registry())
    if (n == name) return text;
  throw ConfigError("unknown scenario '" + name + "' (see `surfns scenarios`)");
}

Scenario builtin_scenario(const std::string& name) {
  return parse_scenario(builtin_scenario_text(name), "scenario:" + name);
}

}  // namespace surfns
