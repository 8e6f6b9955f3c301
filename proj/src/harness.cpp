#include "surfns/harness.hpp"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/parallel.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>

namespace surfns {

const char* code_version() { return "surfns 0.3.0"; }

bool RunReport::passed() const {
  if (diverged) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string>& static_checks() {
  static const std::set<std::string> s = {"killing_residual", "killing_dim", "korn_stable", "korn_inequality"};
  return s;
}

bool is_static(const Scenario& s) {
  if (s.checks.empty()) return s.kind == SurfaceKind::Torus;
  const bool all_static = std::all_of(s.checks.begin(), s.checks.end(),
                                      [](const CheckSpec& c) { return static_checks().count(c.name) > 0; });
  if (!all_static && s.kind == SurfaceKind::Torus)
    throw ConfigError(s.name + ": time evolution is sphere-only; the torus supports static checks only");
  return all_static;
}

CheckResult make_result(const CheckSpec& c, double measured, std::string detail = {}) {
  CheckResult r;
  r.name = c.name;
  r.threshold = c.threshold;
  r.measured = measured;
  r.pass = measured <= c.threshold;  // NaN fails
  r.detail = std::move(detail);
  return r;
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ViscosityField scenario_viscosity(const Scenario& s, const GridPtr& g) {
  if (s.nu_a == 0.0) return constant_viscosity(g, s.nu_value);
  const double v = s.nu_value, a = s.nu_a, R = s.R;
  return make_viscosity(g, [v, a, R](const Eigen::Vector3d& x) { return v + a * x(2) / R; }, 1);
}

SpectralState modes_state(int L, const std::vector<ModeAmp>& modes) {
  SpectralState out(L);
  for (const auto& m : modes) out(m.l, m.m) += m.amp;
  return out;
}

double slowest_rate(const Scenario& s, const Simulation& sim) {
  return 2.0 * nu_lower_bound(s) * sim.form.lambda(2);
}

// ---------------------------------------------------------------------------
// single-trajectory checks

struct TrajectoryContext {
  const Scenario& sc;
  const Simulation& sim;
  const RunResult& run;
  const std::vector<DiagnosticsRecord>& series;
  const std::vector<RunResult>& pairs;
};

DecayFit unk_fit(const std::vector<DiagnosticsRecord>& series, const FitWindow& w) {
  std::vector<double> t, y;
  for (const auto& d : series) {
    if (!(d.norm_uNK > 0)) break;
    t.push_back(d.t);
    y.push_back(d.norm_uNK * d.norm_uNK);
  }
  return fit_decay_rate(t, y, w);
}

int count_not_decreasing(const std::vector<double>& v) {
  int n = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) ++n;
  return n;
}

CheckResult trajectory_check(const CheckSpec& c, const TrajectoryContext& ctx) {
  const auto& series = ctx.series;
  const auto& sc = ctx.sc;
  const std::string& n = c.name;
  if (n == "ledger") {
    double w = 0;
    for (const auto& d : series) w = std::max(w, std::abs(d.energy_residual) / std::max(d.energy, 1.0));
    return make_result(c, w);
  }
  if (n == "lambda1_zero") return make_result(c, std::abs(ctx.sim.form.lambda(1)));
  if (n == "eigen_decay") {
    if (sc.nu_a != 0.0 || sc.forcing != ForcingTag::Zero || sc.init_modes.empty() || sc.init != InitKind::Modes)
      throw ConfigError(sc.name + ": check.eigen_decay needs constant nu, zero forcing and init.modes");
    const ModeAmp m = sc.init_modes.front();
    const double T = ctx.run.final_state.time();
    const double expect = m.amp * std::exp(-sc.nu_value * ctx.sim.form.lambda(m.l) * T);
    const double got = ctx.run.final_state.c(m.l, m.m);
    return make_result(c, std::abs(got - expect) / std::abs(expect),
                       "c(" + std::to_string(m.l) + "," + std::to_string(m.m) + ")(T) = " + fmt("%.15g", got) +
                           ", exact " + fmt("%.15g", expect) + ", lambda_l = " + fmt("%.15g", ctx.sim.form.lambda(m.l)));
  }
  if (n == "decay_rate" || n == "decay_rate_min" || n == "omega_max") {
    const DecayFit f = unk_fit(series, sc.fit);
    const double target = slowest_rate(sc, ctx.sim);
    const std::string detail = "zeta = " + fmt("%.10g", f.zeta) + ", 2 nu_* lambda_2 = " + fmt("%.10g", target) +
                               ", omega = " + fmt("%.3g", f.omega) + (f.warning.empty() ? "" : "; " + f.warning);
    if (n == "omega_max") return make_result(c, f.omega, detail);
    if (n == "decay_rate") return make_result(c, std::abs(f.zeta / target - 1.0), detail);
    return make_result(c, 1.0 - f.zeta / target, detail);
  }
  if (n == "unk_decreasing") {
    std::vector<double> v;
    for (const auto& d : series) v.push_back(d.norm_uNK);
    return make_result(c, count_not_decreasing(v));
  }
  if (n == "uk2" || n == "killing_affine" || n == "fd_law") {
    const KillingIdentityReport k = check_killing_identity(series, ctx.sim.spec, ctx.sim.basis);
    if (n == "uk2") {
      if (!k.uk2_checked) throw ConfigError(sc.name + ": check.uk2 needs a unit Killing force and u_K(0) = 0");
      return make_result(c, k.max_uk2_deviation);
    }
    if (n == "fd_law")
      return make_result(c, k.max_fd_deviation,
                         "slope " + fmt("%.12g", k.fd_slope) + " vs |f_K|^2 = " + fmt("%.12g", k.beta.squaredNorm()));
    return make_result(c, k.max_alpha_deviation);
  }
  if (n == "uk_nonincreasing" || n == "uk_nondecreasing") {
    const MonotonicityReport m = check_monotonicity(
        series, n == "uk_nonincreasing" ? Direction::Nonincreasing : Direction::Nondecreasing);
    return make_result(c, m.ok ? 0 : 1, m.ok ? "" : "first violation at t = " + fmt("%.6g", m.t_violation));
  }
  if (n == "uk_exponential") {
    if (sc.forcing != ForcingTag::F3) throw ConfigError(sc.name + ": check.uk_exponential needs forcing.tag = f3");
    double w = 0;
    for (const auto& d : series)
      w = std::max(w, std::abs(d.norm_uK - std::exp(sc.forcing_sign * (d.t - series[0].t)) * series[0].norm_uK));
    return make_result(c, w);
  }
  if (n == "unk_bound") {
    double m = 0;
    for (const auto& d : series) m = std::max(m, d.norm_uNK);
    return make_result(c, m);
  }
  if (n == "hypotheses") {
    const HypothesisReport h = hypothesis_check(ctx.sim.spec, ctx.sim.grid, ctx.sim.basis, 50, sc.seed);
    std::string detail;
    for (const auto& v : h.violations) detail += (detail.empty() ? "" : "; ") + v;
    return make_result(c, static_cast<double>(h.violations.size()), detail);
  }
  if (n == "contdep_spread" || n == "contdep_ratio") {
    if (ctx.pairs.empty()) throw ConfigError(sc.name + ": check." + n + " needs pair.deltas");
    std::vector<double> ratios;
    std::string detail;
    for (size_t i = 0; i < ctx.pairs.size(); ++i) {
      const auto& a = ctx.run.samples;
      const auto& b = ctx.pairs[i].samples;
      const size_t m = std::min(a.size(), b.size());
      const DependenceReport d = continuous_dependence_ratio(
          ctx.sim.form, {a.begin(), a.begin() + m}, {b.begin(), b.begin() + m}, sc.stepper.t_end);
      // sup |w|^2 plus the dissipation of w, over |w(0)|^2: the constant of the estimate
      const double ratio = d.sup_ratio + d.dissipation_difference / d.initial_gap_sq;
      ratios.push_back(ratio);
      detail += (detail.empty() ? "" : ", ") +
                ("delta " + fmt("%.0e", sc.pair_deltas[i]) + ": " + fmt("%.6g", ratio) + " (sup " +
                 fmt("%.6g", d.sup_ratio) + ")");
    }
    if (n == "contdep_ratio") return make_result(c, *std::max_element(ratios.begin(), ratios.end()), detail);
    if (ratios.size() < 2) throw ConfigError(sc.name + ": check.contdep_spread needs at least two deltas");
    return make_result(c, ratio_spread(ratios), detail);
  }
  if (n == "lambda_affine" || n == "no_crossing") {
    if (ctx.pairs.empty()) throw ConfigError(sc.name + ": check." + n + " needs pair.deltas");
    const auto& a = ctx.run.samples;
    const auto& b = ctx.pairs[0].samples;
    const size_t m = std::min(a.size(), b.size());
    const LambdaSeries ls = lambda_series(ctx.sim.form, {a.begin(), a.begin() + m}, {b.begin(), b.begin() + m});
    if (n == "no_crossing")
      return make_result(c, ls.truncated_at < 0 ? 0.0 : static_cast<double>(m - ls.truncated_at));
    const bool finite = ls.truncated_at < 0 && std::all_of(ls.lambda.begin(), ls.lambda.end(),
                                                           [](double v) { return std::isfinite(v); });
    return make_result(c, finite ? ls.fit_residual : kInf,
                       "max Lambda " + fmt("%.6g", ls.max_lambda) + ", a = " + fmt("%.6g", ls.fit_a) +
                           ", b = " + fmt("%.6g", ls.fit_b) + ", straight-line residual " +
                           fmt("%.4g", ls.line_residual));
  }
  throw ConfigError(sc.name + ": check." + n + " is not available for a single trajectory");
}

// ---------------------------------------------------------------------------
// static checks

CheckResult static_check(const CheckSpec& c, const Scenario& sc, const GridPtr& grid) {
  const std::string& n = c.name;
  if (n == "killing_residual") {
    const KillingBasis b = killing_basis(grid);
    double w = 0;
    for (const auto& v : b.fields) w = std::max(w, std::sqrt(tensor_l2_sq(rate_of_strain(v))) / h1_norm(v));
    return make_result(c, w, "dim = " + std::to_string(b.dim()));
  }
  if (n == "killing_dim") {
    const int d = strain_kernel_dimension(grid, sc.killing_K);
    const int expect = killing_basis(grid).dim();
    return make_result(c, std::abs(d - expect),
                       "strain kernel " + std::to_string(d) + ", basis " + std::to_string(expect));
  }
  const std::vector<int> tr = sc.korn_truncations.empty() ? std::vector<int>{sc.L} : sc.korn_truncations;
  if (n == "korn_stable") {
    if (tr.size() < 2) throw ConfigError(sc.name + ": check.korn_stable needs two or more korn.truncations");
    double lo = kInf, hi = 0;
    std::string detail;
    for (int L : tr) {
      const double cp = korn_constant(grid, L).constant;
      lo = std::min(lo, cp);
      hi = std::max(hi, cp);
      detail += (detail.empty() ? "" : ", ") + ("C_P(" + std::to_string(L) + ") = " + fmt("%.12g", cp));
    }
    return make_result(c, (hi - lo) / hi, detail);
  }
  if (n == "korn_inequality") {
    if (grid->kind != SurfaceKind::Sphere) throw ConfigError(sc.name + ": check.korn_inequality is sphere-only");
    const int L = tr.front();
    const double cp = korn_constant(grid, L).constant;
    const GridPtr g = build_sphere_grid(L + 1, sc.R);
    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> n01;
    double worst = -kInf;
    for (int trial = 0; trial < 100; ++trial) {
      SpectralState s(L);
      for (int i = 3; i < s.coeffs.size(); ++i) s.coeffs(i) = n01(rng);
      const TangentialField v = synthesize(g, s);
      worst = std::max(worst, h1_norm(v) / (cp * std::sqrt(tensor_l2_sq(rate_of_strain(v)))) - 1.0);
    }
    return make_result(c, worst, "C_P(" + std::to_string(L) + ") = " + fmt("%.12g", cp));
  }
  throw ConfigError(sc.name + ": check." + n + " is not a static check");
}

GridPtr static_grid(const Scenario& s) {
  if (s.kind == SurfaceKind::Torus) return build_torus_grid(s.torus_n, s.torus_n, s.R, s.r);
  return build_sphere_grid(s.L, s.R);
}

RunReport blank_report(const Scenario& s) {
  RunReport r;
  r.scenario = s.name;
  r.claims = s.claims;
  r.config_hash = s.config_hash;
  r.seed = s.seed;
  r.code_version = code_version();
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

Simulation build_simulation(const Scenario& s) {
  if (s.kind != SurfaceKind::Sphere) throw GeometryError("time evolution is sphere-only");
  Simulation sim;
  sim.grid = build_sphere_grid(solver_grid_degree(s.L, s.nu_a == 0.0 ? 0 : 1), s.R);
  sim.basis = killing_basis(sim.grid);
  sim.form = assemble_stokes(sim.grid, scenario_viscosity(s, sim.grid), s.L);
  ForcingParams p;
  p.L = s.L;
  p.sign = s.forcing_sign;
  if (!s.forcing_field.empty()) p.field = modes_state(s.L, s.forcing_field);
  p.point = s.forcing_point;
  p.c = s.forcing_c;
  p.axis = s.forcing_axis;
  sim.spec = make_catalog_forcing(s.forcing, p, sim.basis);
  return sim;
}

namespace {

SpectralState shaped_random(int L, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  SpectralState s(L);
  for (int i = 0; i < s.coeffs.size(); ++i) {
    const int l = toroidal_mode(i).l;
    s.coeffs(i) = n01(rng) / (l * l);
  }
  return s;
}

}  // namespace

SpectralState initial_condition(const Scenario& s, const Simulation& sim, std::uint64_t seed) {
  SpectralState u = modes_state(s.L, s.init_modes);
  if (s.init == InitKind::Random) {
    SpectralState r = shaped_random(s.L, seed);
    const auto n = r.coeffs.size();
    const double nk = r.coeffs.tail(n - 3).norm(), k = r.coeffs.head<3>().norm();
    r.coeffs.tail(n - 3) *= nk > 0 ? s.init_unk / nk : 0.0;
    r.coeffs.head<3>() *= k > 0 ? s.init_uk / k : 0.0;
    u.coeffs += r.coeffs;
  }
  u.coeffs += killing_state(sim.basis, s.init_alpha, s.L).coeffs;
  return u;
}

SpectralState random_direction(int L, std::uint64_t seed) {
  SpectralState r = shaped_random(L, seed);
  r.coeffs /= r.coeffs.norm();
  return r;
}

ScenarioOutput run_scenario(const Scenario& s) {
  if (s.members > 0) return run_ensemble(s, s.members);
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioOutput out;
  out.report = blank_report(s);
  if (is_static(s)) {
    const GridPtr g = static_grid(s);
    for (const auto& c : s.checks) out.report.checks.push_back(static_check(c, s, g));
    out.report.seconds = seconds_since(t0);
    return out;
  }
  const Simulation sim = build_simulation(s);
  Dynamics dyn(sim.form, sim.spec, sim.basis, s.convection);
  const SpectralState u0 = initial_condition(s, sim, s.seed);
  const RunResult rr = run(s.stepper, dyn, u0);
  out.series = record_all(dyn, rr.samples);
  out.report.diverged = rr.diverged;
  out.report.message = rr.message;
  std::vector<RunResult> pairs;
  const SpectralState dir = random_direction(s.L, derive_seed(s.seed, 0x5eed));
  for (double delta : s.pair_deltas) {
    SpectralState v = u0;
    v.coeffs += delta * dir.coeffs;
    pairs.push_back(run(s.stepper, dyn, v));
    if (pairs.back().diverged) {
      out.report.diverged = true;
      out.report.message = "paired run: " + pairs.back().message;
    }
  }
  const TrajectoryContext ctx{s, sim, rr, out.series, pairs};
  for (const auto& c : s.checks) out.report.checks.push_back(trajectory_check(c, ctx));
  out.has_final = true;
  out.final_state.kind = SurfaceKind::Sphere;
  out.final_state.R = s.R;
  out.final_state.state = rr.final_state.c;
  out.report.seconds = seconds_since(t0);
  return out;
}

ScenarioOutput run_ensemble(const Scenario& s, int n_members) {
  if (n_members < 2) throw ParameterError("run_ensemble: need at least two members");
  if (!s.pair_deltas.empty()) throw ConfigError(s.name + ": pair.deltas cannot be combined with an ensemble");
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioOutput out;
  out.report = blank_report(s);
  out.report.members = n_members;
  const Simulation sim = build_simulation(s);
  Dynamics dyn(sim.form, sim.spec, sim.basis, s.convection);

  std::vector<RunResult> runs(n_members);
  parallel_for(static_cast<std::size_t>(n_members), [&](std::size_t k) {
    runs[k] = run(s.stepper, dyn, initial_condition(s, sim, derive_seed(s.seed, k + 1)));
  });
  out.member_series.resize(n_members);
  for (int k = 0; k < n_members; ++k) {
    out.member_series[k] = record_all(dyn, runs[k].samples);
    if (runs[k].diverged) {
      out.report.diverged = true;
      out.report.message += (out.report.message.empty() ? "" : "; ") + ("member " + std::to_string(k) + ": " + runs[k].message);
    }
  }

  size_t n_rows = 0;
  for (const auto& m : out.member_series) n_rows = std::max(n_rows, m.size());
  for (size_t i = 0; i < n_rows; ++i) {
    EnsembleRow row;
    row.max.fill(-kInf);
    row.min.fill(kInf);
    row.mean.fill(0.0);
    std::array<int, kEnsembleQuantities> count{};
    for (const auto& m : out.member_series) {
      if (i >= m.size()) continue;
      const DiagnosticsRecord& d = m[i];
      row.t = d.t;
      ++row.members;
      const double q[kEnsembleQuantities] = {d.norm_u, d.norm_uK, d.norm_uNK, d.energy, d.dissipation, d.work,
                                             d.energy_residual, d.lambda_defined ? d.lambda : std::nan("")};
      for (int j = 0; j < kEnsembleQuantities; ++j) {
        if (std::isnan(q[j])) continue;
        row.max[j] = std::max(row.max[j], q[j]);
        row.min[j] = std::min(row.min[j], q[j]);
        row.mean[j] += q[j];
        ++count[j];
      }
    }
    for (int j = 0; j < kEnsembleQuantities; ++j) {
      if (count[j] == 0) row.max[j] = row.min[j] = row.mean[j] = std::nan("");
      else row.mean[j] /= count[j];
    }
    out.ensemble.push_back(row);
  }

  // max-member |u_NK|^2 decay and the absorbing-ball entry time
  std::vector<double> t, y, maxnk, minuk;
  for (const auto& r : out.ensemble) {
    maxnk.push_back(r.max[2]);
    minuk.push_back(r.min[1]);
    if (r.max[2] > 0 && y.size() == t.size()) {
      t.push_back(r.t);
      y.push_back(r.max[2] * r.max[2]);
    }
  }
  DecayFit fit;
  bool have_fit = false;
  if (t.size() >= 10) {
    fit = fit_decay_rate(t, y, s.fit);
    have_fit = true;
  }
  const double radius = std::sqrt(0.5 + fit.omega);
  for (const auto& r : out.ensemble)
    if (r.max[2] <= radius) {
      out.entry_time = r.t;
      break;
    }

  for (const auto& c : s.checks) {
    const std::string& n = c.name;
    if (n == "ens_unk_decreasing") {
      out.report.checks.push_back(make_result(c, count_not_decreasing(maxnk)));
    } else if (n == "ens_decay_rate_min" || n == "ens_omega_max") {
      if (!have_fit) throw ConfigError(s.name + ": check." + n + " needs at least 10 samples");
      const double target = slowest_rate(s, sim);
      const std::string detail = "zeta = " + fmt("%.10g", fit.zeta) + ", 2 nu_* lambda_2 = " + fmt("%.10g", target) +
                                 ", omega = " + fmt("%.3g", fit.omega) + (fit.warning.empty() ? "" : "; " + fit.warning);
      out.report.checks.push_back(
          make_result(c, n == "ens_omega_max" ? fit.omega : 1.0 - fit.zeta / target, detail));
    } else if (n == "ens_entry_time") {
      out.report.checks.push_back(make_result(c, out.entry_time < 0 ? kInf : out.entry_time,
                                              "radius sqrt(1/2 + omega) = " + fmt("%.6g", radius)));
    } else if (n == "ens_uk_nondecreasing") {
      const MonotonicityReport m = check_monotonicity(minuk, Direction::Nondecreasing);
      out.report.checks.push_back(make_result(c, m.ok ? 0 : 1));
    } else if (n == "ens_constant") {
      double w = 0;
      for (const auto& m : out.member_series)
        for (const auto& d : m)
          w = std::max({w, std::abs(d.norm_u - m[0].norm_u), std::abs(d.norm_uK - m[0].norm_uK),
                        std::abs(d.norm_uNK - m[0].norm_uNK)});
      out.report.checks.push_back(make_result(c, w));
    } else {
      // per-member check; the worst member decides
      CheckResult worst;
      bool first = true;
      for (int k = 0; k < n_members; ++k) {
        const std::vector<RunResult> none;
        const TrajectoryContext ctx{s, sim, runs[k], out.member_series[k], none};
        CheckResult r = trajectory_check(c, ctx);
        if (first || !(r.measured <= worst.measured)) {
          worst = r;
          worst.detail = "worst member " + std::to_string(k) + (r.detail.empty() ? "" : ": " + r.detail);
        }
        first = false;
      }
      out.report.checks.push_back(worst);
    }
  }
  out.report.seconds = seconds_since(t0);
  return out;
}

// ---------------------------------------------------------------------------
// serialization

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string csv_text(const std::vector<DiagnosticsRecord>& series, int n_alpha) {
  std::string out = "t,norm_u,norm_uK,norm_uNK,energy,dissipation,work,energy_residual,lambda";
  for (int j = 1; j <= n_alpha; ++j) out += ",alpha_" + std::to_string(j);
  out += "\n";
  for (const auto& d : series) {
    const double q[9] = {d.t, d.norm_u, d.norm_uK, d.norm_uNK, d.energy, d.dissipation, d.work, d.energy_residual,
                         d.lambda_defined ? d.lambda : std::nan("")};
    for (int j = 0; j < 9; ++j) {
      if (j) out += ",";
      append_number(out, q[j]);
    }
    for (int j = 0; j < n_alpha; ++j) {
      out += ",";
      append_number(out, j < d.alpha.size() ? d.alpha(j) : std::nan(""));
    }
    out += "\n";
  }
  return out;
}

std::string ensemble_csv_text(const std::vector<EnsembleRow>& rows) {
  static const char* names[kEnsembleQuantities] = {"norm_u", "norm_uK", "norm_uNK", "energy",
                                                   "dissipation", "work", "energy_residual", "lambda"};
  std::string out = "t,members";
  for (const char* n : names) out += std::string(",") + n + "_max," + n + "_min," + n + "_mean";
  out += "\n";
  for (const auto& r : rows) {
    append_number(out, r.t);
    out += "," + std::to_string(r.members);
    for (int j = 0; j < kEnsembleQuantities; ++j) {
      for (double v : {r.max[j], r.min[j], r.mean[j]}) {
        out += ",";
        append_number(out, v);
      }
    }
    out += "\n";
  }
  return out;
}

std::string report_json(const RunReport& r, double entry_time) {
  nlohmann::ordered_json j;
  j["scenario"] = r.scenario;
  j["claims"] = r.claims;
  j["passed"] = r.passed();
  j["diverged"] = r.diverged;
  if (!r.message.empty()) j["message"] = r.message;
  if (r.members > 0) {
    j["members"] = r.members;
    j["entry_time"] = entry_time < 0 ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(entry_time);
  }
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["measured"] = std::isfinite(c.measured) ? nlohmann::ordered_json(c.measured) : nlohmann::ordered_json(nullptr);
    e["threshold"] = c.threshold;
    e["relation"] = "<=";
    if (!c.detail.empty()) e["detail"] = c.detail;
    j["checks"].push_back(e);
  }
  j["seconds"] = r.seconds;
  char hash[16];
  std::snprintf(hash, sizeof hash, "%08x", r.config_hash);
  j["provenance"] = {{"config_crc32", hash}, {"seed", r.seed}, {"code_version", r.code_version}};
  return j.dump(2) + "\n";
}

void write_outputs(const std::string& dir, const ScenarioOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(fs::path(dir) / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (fs::path(dir) / name).string());
    f << text;
  };
  const std::string& base = out.report.scenario;
  if (!out.series.empty()) write(base + ".csv", csv_text(out.series, static_cast<int>(out.series[0].alpha.size())));
  if (!out.ensemble.empty()) {
    write(base + ".ensemble.csv", ensemble_csv_text(out.ensemble));
    for (size_t k = 0; k < out.member_series.size(); ++k) {
      const auto& m = out.member_series[k];
      if (m.empty()) continue;
      char idx[16];
      std::snprintf(idx, sizeof idx, "%03zu", k);
      write(base + ".member_" + idx + ".csv", csv_text(m, static_cast<int>(m[0].alpha.size())));
    }
  }
  write(base + ".report.json", report_json(out.report, out.entry_time));
  if (out.has_final) save_checkpoint(out.final_state, (fs::path(dir) / (base + ".final.snsk")).string());
}

// ---------------------------------------------------------------------------
// static reports

SpectrumReport spectrum(const Scenario& s) {
  const Simulation sim = build_simulation(s);
  SpectrumReport r;
  for (int l = 1; l <= s.L; ++l) r.lambda_constant.push_back(sim.form.lambda(l));
  r.eigenvalues = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sim.form.A, Eigen::EigenvaluesOnly).eigenvalues();
  return r;
}

std::vector<KornResult> korn_table(const Scenario& s) {
  const GridPtr g = static_grid(s);
  const std::vector<int> tr = s.korn_truncations.empty() ? std::vector<int>{s.L} : s.korn_truncations;
  std::vector<KornResult> out;
  for (int L : tr) out.push_back(korn_constant(g, L));
  return out;
}

Decomposition decompose(const Checkpoint& c) {
  if (c.kind != SurfaceKind::Sphere) throw GeometryError("decompose: spectral checkpoints are sphere-only");
  const GridPtr g = build_sphere_grid(solver_grid_degree(c.state.L, 0), c.R);
  const KillingBasis b = killing_basis(g);
  Decomposition d;
  d.alpha = killing_coefficients(b, c.state);
  d.norm_u = c.state.coeffs.norm();
  d.norm_uK = d.alpha.norm();
  d.norm_uNK = c.state.coeffs.tail(c.state.coeffs.size() - 3).norm();
  return d;
}

}  // namespace surfns
