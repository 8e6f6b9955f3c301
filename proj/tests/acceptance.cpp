// Acceptance run: one PASS/FAIL line per criterion, each with its measured
// values, tolerance and wall time. Exit status 0 iff every line passes.

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/harness.hpp"
#include "surfns/parallel.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>

using namespace surfns;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* what, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool pass = o.ok && s < budget_s;
  if (!pass) ++failures;
  std::printf("%s %2d %-34s %s; %.2f s (budget %.0f s)\n", pass ? "PASS" : "FAIL", id, what, o.detail.c_str(), s,
              budget_s);
  std::fflush(stdout);
}

// Largest value of a named check, or +inf when it is missing.
double check_value(const RunReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c.measured;
  return INFINITY;
}

const DiagnosticsRecord* at_time(const std::vector<DiagnosticsRecord>& s, double t) {
  for (const auto& d : s)
    if (std::abs(d.t - t) < 1e-9) return &d;
  return nullptr;
}

double strain_ratio(const TangentialField& v) { return std::sqrt(tensor_l2_sq(rate_of_strain(v))) / h1_norm(v); }

}  // namespace

int main() {
  criterion(1, "Killing exactness", 5, [] {
    const KillingBasis bs = killing_basis(build_sphere_grid(32, 1.0));
    double ws = 0;
    for (const auto& v : bs.fields) ws = std::max(ws, strain_ratio(v));
    const GridPtr gt = build_torus_grid(64, 64, 1.0, 0.4);
    const KillingBasis bt = killing_basis(gt);
    double wt = 0;
    for (const auto& v : bt.fields) wt = std::max(wt, strain_ratio(v));
    const int kernel = strain_kernel_dimension(gt, 8);
    const bool ok = bs.dim() == 3 && ws <= 1e-9 && bt.dim() == 1 && kernel == 1 && wt <= 1e-9;
    return Outcome{ok, "sphere L=32 dim " + std::to_string(bs.dim()) + " max|eps|/|v|_H1 " + fmt("%.2e", ws) +
                           "; torus 64x64 dim " + std::to_string(bt.dim()) + " (strain kernel " +
                           std::to_string(kernel) + ") " + fmt("%.2e", wt) + " <= 1e-9"};
  });

  criterion(2, "free-decay eigenlaw", 10, [] {
    const Scenario s = parse_scenario(R"(name = acc2
L = 16
nu.value = 1
forcing.tag = zero
init.modes = 2,0:1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 1
time.stride = 50
)");
    const SpectrumReport sp = spectrum(s);
    const Simulation sim = build_simulation(s);
    Dynamics dyn(sim.form, sim.spec, sim.basis, true);
    const RunResult rr = run(s.stepper, dyn, initial_condition(s, sim, s.seed));
    const double lam2 = sp.lambda_constant[1];
    const double exact = std::exp(-lam2 * rr.final_state.time());
    const double rel = std::abs(rr.final_state.c(2, 0) - exact) / exact;
    const double l1 = std::abs(sp.lambda_constant[0]);
    return Outcome{!rr.diverged && rel <= 1e-6 && l1 <= 1e-10,
                   "rel err " + fmt("%.2e", rel) + " <= 1e-6 (lambda_2 = " + fmt("%.12g", lam2) + "), |lambda_1| " +
                       fmt("%.1e", l1) + " <= 1e-10"};
  });

  criterion(3, "constant-Killing growth", 10, [] {
    const Scenario s = parse_scenario(R"(name = acc3
L = 8
forcing.tag = constant_killing
forcing.c = 1
forcing.axis = 1
time.scheme = rk4
time.dt = 1e-3
time.t_end = 2
time.stride = 50
)");
    const ScenarioOutput o = run_scenario(s);
    double da = 0, du = 0;
    bool found = true;
    for (double t : {0.5, 1.0, 2.0}) {
      const DiagnosticsRecord* d = at_time(o.series, t);
      if (!d) {
        found = false;
        continue;
      }
      da = std::max(da, std::abs(d->alpha(0) - t));
      du = std::max(du, std::abs(d->norm_uK * d->norm_uK - t * t));
    }
    return Outcome{found && da <= 1e-8 && du <= 1e-6,
                   "max|alpha_1 - t| " + fmt("%.2e", da) + " <= 1e-8, max||u_K|^2 - t^2| " + fmt("%.2e", du) +
                       " <= 1e-6 at t = 0.5, 1, 2"};
  });

  criterion(4, "sign-conditioned monotonicity", 20, [] {
    std::string detail;
    bool ok = true;
    for (int sign : {-1, 1}) {
      Scenario s = builtin_scenario(sign < 0 ? "f3_minus_decay" : "f3_plus_growth");
      const ScenarioOutput o = run_scenario(s);
      const DiagnosticsRecord& a = o.series.front();
      const DiagnosticsRecord* b = at_time(o.series, 1.0);
      const double dev = b ? std::abs(b->norm_uK - std::exp(sign * 1.0) * a.norm_uK) : INFINITY;
      const double mono = check_value(o.report, sign < 0 ? "uk_nonincreasing" : "uk_nondecreasing");
      ok = ok && dev <= 1e-6 && mono == 0.0 && o.report.seconds < 10;
      detail += std::string(detail.empty() ? "" : "; ") + (sign < 0 ? "f3-" : "f3+") + " |u_K(1)| dev " +
                fmt("%.2e", dev) + " <= 1e-6, monotone " + (mono == 0.0 ? "yes" : "no") + " (" +
                fmt("%.2f", o.report.seconds) + " s)";
    }
    return Outcome{ok, detail};
  });

  criterion(5, "Killing conservation under f1", 20, [] {
    const Scenario s = parse_scenario(R"(name = acc5
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
)");
    const ScenarioOutput o = run_scenario(s);
    const auto& a = o.series.front().alpha;
    const auto& b = o.series.back().alpha;
    const double drift = (b - a).cwiseAbs().maxCoeff();
    return Outcome{!o.report.diverged && std::abs(o.series.back().t - 5) < 1e-12 && drift <= 1e-10,
                   "max_j |alpha_j(5) - alpha_j(0)| " + fmt("%.2e", drift) + " <= 1e-10"};
  });

  criterion(6, "energy balance, variable nu", 30, [] {
    const ScenarioOutput o = run_scenario(builtin_scenario("variable_viscosity_energy"));
    const double w = check_value(o.report, "ledger");
    return Outcome{!o.report.diverged && w <= 1e-6,
                   "nu = 1 + 0.5 x3/R, f2-, L=16, dt=1e-3: max|residual|/max(E,1) " + fmt("%.2e", w) +
                       " <= 1e-6 (RK4)"};
  });

  criterion(7, "exponential non-Killing decay", 60, [] {
    const ScenarioOutput o = run_scenario(builtin_scenario("nonkilling_decay_ensemble"));
    const double rate = check_value(o.report, "ens_decay_rate_min");
    const double omega = check_value(o.report, "ens_omega_max");
    const double mono = check_value(o.report, "ens_unk_decreasing");
    return Outcome{!o.report.diverged && rate <= 0.01 && omega <= 1e-10 && mono == 0.0,
                   "8 members: zeta/(2 lambda_2) = " + fmt("%.6f", 1 - rate) + " >= 0.99, omega " +
                       fmt("%.1e", omega) + " <= 1e-10, max |u_NK| strictly decreasing " +
                       (mono == 0.0 ? "yes" : "no")};
  });

  criterion(8, "Korn constant", 60, [] {
    const ScenarioOutput o = run_scenario(builtin_scenario("korn_sphere"));
    const double spread = check_value(o.report, "korn_stable");
    const double ineq = check_value(o.report, "korn_inequality");
    return Outcome{spread <= 0.01 && ineq <= 1e-8,
                   "|C_P(16) - C_P(32)| / C_P " + fmt("%.2e", spread) + " <= 1e-2; max |v|_H1/(C_P|eps(v)|) - 1 = " +
                       fmt("%.3e", ineq) + " <= 1e-8 over 100 samples"};
  });

  criterion(9, "continuous dependence", 60, [] {
    const ScenarioOutput o = run_scenario(builtin_scenario("continuous_dependence"));
    const double spread = check_value(o.report, "contdep_spread");
    return Outcome{!o.report.diverged && spread <= 2,
                   "sup-ratio spread over delta = 1e-2, 1e-3, 1e-4: " + fmt("%.6f", spread) + " <= 2"};
  });

  criterion(10, "backward-uniqueness probe", 60, [] {
    const ScenarioOutput o = run_scenario(builtin_scenario("backward_uniqueness_pair"));
    const double res = check_value(o.report, "lambda_affine");
    const double cross = check_value(o.report, "no_crossing");
    return Outcome{!o.report.diverged && res <= 0.05 && cross == 0.0,
                   "Lambda finite on [0,2], affine-fit residual " + fmt("%.2e", res) + " <= 5e-2"};
  });

  criterion(11, "infrastructure", 10, [] {
    const int L = 16;
    const GridPtr g = build_sphere_grid(dealias_rule(L).degree, 1.0);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01;
    double rt = 0, pv = 0;
    for (int trial = 0; trial < 10; ++trial) {
      SpectralState s(L);
      for (int i = 0; i < s.coeffs.size(); ++i) s.coeffs(i) = n01(rng);
      const TangentialField u = synthesize(g, s);
      rt = std::max(rt, (analyze(u, L).coeffs - s.coeffs).cwiseAbs().maxCoeff());
      const double q = l2_inner(u, u);
      pv = std::max(pv, std::abs(q - s.coeffs.squaredNorm()) / q);
    }
    Checkpoint cp;
    cp.state = SpectralState(L);
    for (int i = 0; i < cp.state.coeffs.size(); ++i) cp.state.coeffs(i) = n01(rng);
    cp.state.t = 0.123;
    const Checkpoint back = decode_checkpoint(encode_checkpoint(cp));
    const bool exact = std::memcmp(back.state.coeffs.data(), cp.state.coeffs.data(),
                                   sizeof(double) * cp.state.coeffs.size()) == 0 && back.state.t == cp.state.t;

    Scenario s = parse_scenario(R"(name = acc11
L = 6
seed = 99
ensemble.members = 4
forcing.tag = f2
forcing.sign = -1
forcing.field = 2,0:1
init.kind = random
init.uk = 0.5
init.unk = 1
time.scheme = rk4
time.dt = 2e-3
time.t_end = 0.2
time.stride = 5
)");
    set_thread_count(1);
    const ScenarioOutput a = run_scenario(s);
    set_thread_count(4);
    const ScenarioOutput b = run_scenario(s);
    set_thread_count(0);
    bool same = ensemble_csv_text(a.ensemble) == ensemble_csv_text(b.ensemble);
    for (size_t k = 0; k < a.member_series.size(); ++k)
      same = same && csv_text(a.member_series[k], 3) == csv_text(b.member_series[k], 3);
    return Outcome{rt <= 1e-12 && pv <= 1e-10 && exact && same,
                   "round trip " + fmt("%.1e", rt) + " <= 1e-12, Parseval " + fmt("%.1e", pv) +
                       " <= 1e-10, checkpoint bit-exact " + (exact ? "yes" : "no") + ", CSV 1 vs 4 threads " +
                       (same ? "identical" : "DIFFERENT")};
  });

  std::printf("%s: %d of 11 criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
