#include "surfns/timestepper.hpp"

#include "surfns/errors.hpp"

#include <cmath>
#include <cstdio>

namespace surfns {

const char* scheme_name(Scheme s) { return s == Scheme::RK4 ? "rk4" : "imex"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "imex" || name == "imex-cnab2") return Scheme::ImexCNAB2;
  if (name == "rk4") return Scheme::RK4;
  throw ParameterError("unknown time scheme '" + name + "' (expected imex or rk4)");
}

Dynamics::Dynamics(const StokesForm& form, const ForcingSpec& spec, const KillingBasis& basis, bool convection)
    : form_(form), spec_(spec), basis_(basis), convection_(convection) {
  if (spec.L != form.L) throw ParameterError("Dynamics: forcing and Stokes truncations differ");
  require_same_grid(form.grid, basis.grid, "Dynamics");
  f_zero_ = forcing(Eigen::VectorXd::Zero(toroidal_count(form.L)));
}

Eigen::VectorXd Dynamics::forcing(const Eigen::VectorXd& c) const {
  return forcing_apply(spec_, form_.grid, basis_, SpectralState(form_.L, c)).coeffs;
}

Eigen::VectorXd Dynamics::explicit_part(const Eigen::VectorXd& c) const {
  Eigen::VectorXd g = forcing(c);
  g.noalias() -= form_.A_prime * c;
  if (convection_) g -= convective_term(form_.grid, SpectralState(form_.L, c)).coeffs;
  return g;
}

Eigen::VectorXd Dynamics::rhs(const Eigen::VectorXd& c) const {
  return explicit_part(c) - form_.nu_bar * form_.D.cwiseProduct(c);
}

void Dynamics::ledger_terms(const Eigen::VectorXd& c, const Eigen::VectorXd& cdot, double& D, double& dD, double& W,
                            double& dW) const {
  const Eigen::VectorXd Ac = form_.A * c;
  D = c.dot(Ac);
  dD = 2.0 * cdot.dot(Ac);
  const Eigen::VectorXd f = forcing(c);
  W = f.dot(c);
  dW = f.dot(cdot) + (forcing(cdot) - f_zero_).dot(c);
}

SimState initial_state(const SpectralState& u0) {
  if (!u0.coeffs.allFinite()) throw ParameterError("initial state has non-finite coefficients");
  SimState s;
  s.c = u0;
  s.energy0 = s.energy();
  return s;
}

void check_step_size(Scheme scheme, const Dynamics& dyn, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
  char buf[200];
  if (scheme == Scheme::RK4) {
    const double z = dyn.form().a_radius * dt;
    if (z > 2.7) {
      std::snprintf(buf, sizeof buf, "rk4 stability bound violated: lambda_max * dt = %.4g > 2.7", z);
      throw ParameterError(buf);
    }
  } else {
    const double z = dyn.form().a_prime_radius * dt;
    if (z > 1.0) {
      std::snprintf(buf, sizeof buf, "imex stability bound violated: rho(A') * dt = %.4g > 1", z);
      throw ParameterError(buf);
    }
  }
}

namespace {

// Hermite-corrected trapezoid, exact for cubics.
double hermite(double h, double g0, double dg0, double g1, double dg1) {
  return 0.5 * h * (g0 + g1) + h * h / 12.0 * (dg0 - dg1);
}

void ensure_cdot(SimState& s, const Dynamics& dyn) {
  if (s.explicit_now.size() == 0) s.explicit_now = dyn.explicit_part(s.c.coeffs);
  if (s.cdot.size() == 0) s.cdot = s.explicit_now - dyn.form().nu_bar * dyn.form().D.cwiseProduct(s.c.coeffs);
}

void finish_step(const SimState& from, SimState& to, const Dynamics& dyn, double h) {
  if (!to.c.coeffs.allFinite() || !to.cdot.allFinite()) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "non-finite coefficients at t = %.6g (step %ld)", from.time() + h, from.step + 1);
    throw DivergenceError(buf, from);
  }
  double D0, dD0, W0, dW0, D1, dD1, W1, dW1;
  dyn.ledger_terms(from.c.coeffs, from.cdot, D0, dD0, W0, dW0);
  dyn.ledger_terms(to.c.coeffs, to.cdot, D1, dD1, W1, dW1);
  to.dissipation_integral = from.dissipation_integral + hermite(h, D0, dD0, D1, dD1);
  to.work_integral = from.work_integral + hermite(h, W0, dW0, W1, dW1);
  to.step = from.step + 1;
  to.dt = h;
  to.energy0 = from.energy0;
}

}  // namespace

SimState step_imex(const SimState& state, const Dynamics& dyn, double dt) {
  SimState cur = state;
  ensure_cdot(cur, dyn);
  const Eigen::VectorXd& c = cur.c.coeffs;
  const Eigen::ArrayXd half = 0.5 * dt * dyn.form().nu_bar * dyn.form().D.array();
  auto cn = [&](const Eigen::VectorXd& g) -> Eigen::VectorXd {
    return ((c.array() * (1.0 - half) + dt * g.array()) / (1.0 + half)).matrix();
  };
  Eigen::VectorXd next;
  if (cur.prev_explicit.size() == 0) {
    const Eigen::VectorXd pred = cn(cur.explicit_now);
    next = cn(0.5 * (cur.explicit_now + dyn.explicit_part(pred)));
  } else {
    const double w = dt / cur.prev_dt;
    next = cn((1.0 + 0.5 * w) * cur.explicit_now - 0.5 * w * cur.prev_explicit);
  }
  SimState out;
  out.c = SpectralState(cur.c.L, std::move(next), cur.c.t + dt);
  if (out.c.coeffs.allFinite()) {
    out.explicit_now = dyn.explicit_part(out.c.coeffs);
    out.cdot = out.explicit_now - dyn.form().nu_bar * dyn.form().D.cwiseProduct(out.c.coeffs);
  } else {
    out.cdot = out.c.coeffs;
  }
  out.prev_explicit = cur.explicit_now;
  out.prev_dt = dt;
  finish_step(cur, out, dyn, dt);
  return out;
}

SimState step_rk4(const SimState& state, const Dynamics& dyn, double dt) {
  SimState cur = state;
  if (cur.cdot.size() == 0) cur.cdot = dyn.rhs(cur.c.coeffs);
  const Eigen::VectorXd& c = cur.c.coeffs;
  const Eigen::VectorXd& k1 = cur.cdot;
  const Eigen::VectorXd k2 = dyn.rhs(c + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = dyn.rhs(c + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = dyn.rhs(c + dt * k3);
  SimState out;
  out.c = SpectralState(cur.c.L, c + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), cur.c.t + dt);
  out.cdot = out.c.coeffs.allFinite() ? dyn.rhs(out.c.coeffs) : out.c.coeffs;
  finish_step(cur, out, dyn, dt);
  return out;
}

namespace {

double cfl_step(const Dynamics& dyn, const SimState& s, double cfl) {
  const SurfaceGrid& g = *dyn.form().grid;
  double dmin = 1e300;
  for (int j = 0; j + 1 < g.n_lat; ++j) dmin = std::min(dmin, g.lat_angles(j + 1) - g.lat_angles(j));
  dmin = std::min(dmin, std::sin(g.lat_angles(0)) * 2.0 * M_PI / g.n_lon);
  dmin *= g.radius;
  const double umax = synthesize(dyn.form().grid, s.c).comps.rowwise().norm().maxCoeff();
  return umax > 0 ? cfl * dmin / umax : 1e300;
}

}  // namespace

RunResult run_from(const StepperConfig& config, const Dynamics& dyn, SimState start) {
  if (!(config.t_end > start.time())) throw ParameterError("t_end must exceed the start time");
  if (config.stride < 1) throw ParameterError("sample stride must be >= 1");
  check_step_size(config.scheme, dyn, config.dt);
  RunResult r;
  SimState s = std::move(start);
  if (config.scheme == Scheme::ImexCNAB2) ensure_cdot(s, dyn);
  else if (s.cdot.size() == 0) s.cdot = dyn.rhs(s.c.coeffs);
  r.samples.push_back(s);
  const double t0 = s.time();
  long k = 0;
  try {
    while (true) {
      const double remaining = config.t_end - s.time();
      if (remaining <= 1e-9 * config.dt) break;
      double h = config.dt;
      if (config.adaptive) h = std::min(h, cfl_step(dyn, s, config.cfl));
      if (remaining < h * (1 + 1e-9)) h = std::abs(remaining - h) <= 1e-9 * h ? h : remaining;
      SimState next = config.scheme == Scheme::RK4 ? step_rk4(s, dyn, h) : step_imex(s, dyn, h);
      ++k;
      // time from the step count keeps fixed-step runs free of drift
      if (!config.adaptive && h == config.dt) next.c.t = t0 + k * config.dt;
      s = std::move(next);
      if (k % config.stride == 0) r.samples.push_back(s);
    }
  } catch (const DivergenceError& e) {
    r.diverged = true;
    r.message = e.what();
    s = e.last_good;
  }
  if (r.samples.back().step != s.step) r.samples.push_back(s);
  r.final_state = s;
  return r;
}

RunResult run(const StepperConfig& config, const Dynamics& dyn, const SpectralState& u0) {
  return run_from(config, dyn, initial_state(u0));
}

}  // namespace surfns
