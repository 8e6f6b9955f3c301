#pragma once

// Time integration of dc/dt = -A c - N(c) + F(c) with an energy ledger.

#include "surfns/operators.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace surfns {

enum class Scheme { ImexCNAB2, RK4 };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct StepperConfig {
  Scheme scheme = Scheme::ImexCNAB2;
  double dt = 1e-3;
  double t_end = 1.0;
  int stride = 10;       // steps between samples
  bool adaptive = false; // CFL-limited dt (never above `dt`)
  double cfl = 0.5;
};

/// The right-hand side, split as -nu_bar D c + G(c) with G = -A'c - N(c) + F(c).
class Dynamics {
 public:
  Dynamics(const StokesForm& form, const ForcingSpec& spec, const KillingBasis& basis, bool convection = true);

  const StokesForm& form() const { return form_; }
  const ForcingSpec& forcing_spec() const { return spec_; }
  const KillingBasis& basis() const { return basis_; }
  bool convection_enabled() const { return convection_; }
  int L() const { return form_.L; }

  Eigen::VectorXd forcing(const Eigen::VectorXd& c) const;
  Eigen::VectorXd explicit_part(const Eigen::VectorXd& c) const;
  Eigen::VectorXd rhs(const Eigen::VectorXd& c) const;

  /// Instantaneous ledger terms D = c.Ac, W = F(c).c and their time
  /// derivatives along cdot (the forcing catalog is affine in u).
  void ledger_terms(const Eigen::VectorXd& c, const Eigen::VectorXd& cdot, double& D, double& dD, double& W,
                    double& dW) const;

 private:
  const StokesForm& form_;
  const ForcingSpec& spec_;
  const KillingBasis& basis_;
  bool convection_;
  Eigen::VectorXd f_zero_;
};

struct SimState {
  SpectralState c;
  long step = 0;
  double dt = 0.0;
  double energy0 = 0.0;
  double work_integral = 0.0;
  double dissipation_integral = 0.0;
  // Caches at the current state (empty when unknown, e.g. after a restart).
  Eigen::VectorXd cdot;          // full right-hand side
  Eigen::VectorXd explicit_now;  // explicit part G
  // IMEX history: explicit part at the previous step and its step size.
  Eigen::VectorXd prev_explicit;
  double prev_dt = 0.0;

  double time() const { return c.t; }
  double energy() const { return 0.5 * c.coeffs.squaredNorm(); }
  double ledger_residual() const { return energy() - energy0 + dissipation_integral - work_integral; }
};

SimState initial_state(const SpectralState& u0);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, SimState last) : std::runtime_error(what), last_good(std::move(last)) {}
  SimState last_good;
};

/// Crank-Nicolson on nu_bar D, Adams-Bashforth 2 on G; the first step (or a
/// step without history) uses a Heun predictor-corrector for G.
SimState step_imex(const SimState& state, const Dynamics& dyn, double dt);
SimState step_rk4(const SimState& state, const Dynamics& dyn, double dt);

/// Stability limits: RK4 needs lambda_max(A) dt <= 2.7, IMEX needs rho(A') dt <= 1.
void check_step_size(Scheme scheme, const Dynamics& dyn, double dt);

struct RunResult {
  std::vector<SimState> samples;  // includes t = 0 and the final state
  SimState final_state;
  bool diverged = false;
  std::string message;
};

RunResult run(const StepperConfig& config, const Dynamics& dyn, const SpectralState& u0);
RunResult run_from(const StepperConfig& config, const Dynamics& dyn, SimState start);

}  // namespace surfns
