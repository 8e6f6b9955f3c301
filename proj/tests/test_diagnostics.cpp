#include "doctest.h"

#include "surfns/diagnostics.hpp"
#include "surfns/differential.hpp"
#include "surfns/errors.hpp"

#include <cmath>
#include <random>

using namespace surfns;

namespace {

struct Setup {
  int L;
  GridPtr g;
  KillingBasis b;
  StokesForm form;
  ForcingSpec spec;

  explicit Setup(int L_, double tilt = 0.0)
      : L(L_),
        g(build_sphere_grid(solver_grid_degree(L_, tilt != 0.0 ? 1 : 0), 1.0)),
        b(killing_basis(g)),
        form(assemble_stokes(g, tilt != 0.0 ? make_viscosity(
                                                  g, [tilt](const Eigen::Vector3d& x) { return 1.0 + tilt * x(2); }, 1)
                                            : constant_viscosity(g, 1.0),
                             L_)) {
    ForcingParams p;
    p.L = L;
    spec = make_catalog_forcing(ForcingTag::Zero, p, b);
  }

  void set_forcing(ForcingTag tag, ForcingParams p) {
    p.L = L;
    spec = make_catalog_forcing(tag, p, b);
  }

  RunResult go(const SpectralState& u0, double t_end, double dt, int stride, bool convection = true) const {
    Dynamics dyn(form, spec, b, convection);
    StepperConfig cfg;
    cfg.scheme = Scheme::RK4;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.stride = stride;
    return run(cfg, dyn, u0);
  }
};

SpectralState random_state(int L, std::uint64_t seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  SpectralState s(L);
  for (int i = 0; i < s.coeffs.size(); ++i) s.coeffs(i) = amp * n01(rng) / std::pow(toroidal_mode(i).l, 3);
  return s;
}

}  // namespace

TEST_CASE("record on simple states") {
  Setup su(6, 0.5);
  Dynamics dyn(su.form, su.spec, su.b);

  const SimState k = initial_state(killing_state(su.b, Eigen::Vector3d(1, 0, 0), su.L));
  const DiagnosticsRecord rk = record(dyn, k);
  CHECK(std::abs(rk.norm_uK - 1.0) < 1e-13);
  CHECK(rk.dissipation < 1e-12);
  CHECK(rk.lambda_defined);
  CHECK(rk.lambda < 1e-12);

  const DiagnosticsRecord r0 = record(dyn, initial_state(SpectralState(su.L)));
  CHECK_FALSE(r0.lambda_defined);
  CHECK(r0.norm_u == 0.0);
  CHECK(r0.norm_uK == 0.0);
  CHECK(r0.norm_uNK == 0.0);

  // nodal route for the dissipation with variable viscosity
  const SpectralState s = random_state(su.L, 3);
  const DiagnosticsRecord rs = record(dyn, initial_state(s));
  const TangentialTensor e = rate_of_strain(synthesize(su.g, s));
  const Eigen::VectorXd e2 = e.comps.rowwise().squaredNorm();
  const double nodal = 2.0 * (e2.cwiseProduct(su.form.nu.values).cwiseProduct(su.g->weights)).sum();
  CHECK(std::abs(rs.dissipation - nodal) < 1e-10 * nodal);
  CHECK(std::abs(rs.norm_u * rs.norm_u - rs.norm_uK * rs.norm_uK - rs.norm_uNK * rs.norm_uNK) <=
        1e-10 * rs.norm_u * rs.norm_u);
  CHECK(std::abs(rs.norm_u - l2_norm(synthesize(su.g, s))) < 1e-12);

  SpectralState scaled = s;
  for (double c : {-3.0, 1e-5, 250.0}) {
    scaled.coeffs = c * s.coeffs;
    CHECK(std::abs(record(dyn, initial_state(scaled)).lambda - rs.lambda) <= 1e-12 * rs.lambda);
  }
}

TEST_CASE("Lambda of the degree-2 mode") {
  Setup su(6);
  Dynamics dyn(su.form, su.spec, su.b);
  SpectralState s(su.L);
  s(2, 0) = 1.0;
  // (l(l+1) - 2) / R^2
  CHECK(std::abs(record(dyn, initial_state(s)).lambda - 4.0) < 1e-11);
}

TEST_CASE("decay fit on synthetic series") {
  std::vector<double> t, a, b;
  for (int i = 0; i <= 400; ++i) {
    t.push_back(0.025 * i);
    a.push_back(std::exp(-3.0 * t.back()));
    b.push_back(std::exp(-2.0 * t.back()) + 0.5);
  }
  const DecayFit fa = fit_decay_rate(t, a);
  CHECK(std::abs(fa.zeta - 3.0) < 1e-3);
  CHECK(fa.omega <= 1e-12);
  CHECK(fa.tail_monotone);
  const DecayFit fb = fit_decay_rate(t, b, {0.0, 2.0});
  CHECK(std::abs(fb.zeta - 2.0) < 1e-2);
  CHECK(std::abs(fb.omega - 0.5) < 1e-3);

  std::vector<double> bumpy = a;
  bumpy[395] *= 3;
  CHECK_FALSE(fit_decay_rate(t, bumpy).tail_monotone);
  CHECK_THROWS_AS(fit_decay_rate({0, 1, 2}, {1, 1, 1}), ParameterError);
}

TEST_CASE("late-time decay of two modes follows the slowest one") {
  Setup su(6);
  SpectralState u0(su.L);
  u0(2, 0) = 1.0;
  u0(3, 1) = 1.0;
  const RunResult r = su.go(u0, 4.0, 2e-3, 25);
  Dynamics dyn(su.form, su.spec, su.b);
  std::vector<double> t, y;
  for (const auto& d : record_all(dyn, r.samples)) {
    t.push_back(d.t);
    y.push_back(d.norm_uNK * d.norm_uNK);
  }
  const DecayFit f = fit_decay_rate(t, y, {1.5, 3.0});
  const double target = 2.0 * su.form.lambda(2);
  CHECK(f.zeta >= target * (1 - 1e-3));
  CHECK(f.zeta <= target * (1 + 1e-3));
}

TEST_CASE("Killing identities") {
  Setup su(6);
  ForcingParams p;
  p.c = 1.0;
  p.axis = 1;
  su.set_forcing(ForcingTag::ConstantKilling, p);
  const RunResult r = su.go(SpectralState(su.L), 2.0, 1e-2, 50);
  Dynamics dyn(su.form, su.spec, su.b);
  const auto series = record_all(dyn, r.samples);
  const KillingIdentityReport k = check_killing_identity(series, su.spec, su.b);
  CHECK(k.uk2_checked);
  CHECK(k.max_uk2_deviation < 1e-6);
  for (const auto& d : series)
    if (std::abs(d.t - 0.5) < 1e-12 || std::abs(d.t - 1.0) < 1e-12 || std::abs(d.t - 2.0) < 1e-12)
      CHECK(std::abs(d.norm_uK * d.norm_uK - d.t * d.t) < 1e-6);

  p.c = 2.0;
  p.axis = 2;
  su.set_forcing(ForcingTag::ConstantKilling, p);
  const RunResult r2 = su.go(random_state(su.L, 4), 1.0, 1e-2, 10);
  Dynamics dyn2(su.form, su.spec, su.b);
  const KillingIdentityReport k2 = check_killing_identity(record_all(dyn2, r2.samples), su.spec, su.b);
  CHECK_FALSE(k2.uk2_checked);
  CHECK(std::abs(k2.fd_slope - 4.0) < 1e-8);
  CHECK(k2.max_fd_deviation < 1e-8);
  CHECK(k2.max_alpha_deviation < 1e-8);

  SpectralState g(su.L);
  g(2, 0) = 1.0;
  p.field = g;
  su.set_forcing(ForcingTag::ConstantField, p);
  const RunResult r3 = su.go(random_state(su.L, 5), 5.0, 1e-2, 100);
  Dynamics dyn3(su.form, su.spec, su.b);
  const KillingIdentityReport k3 = check_killing_identity(record_all(dyn3, r3.samples), su.spec, su.b);
  CHECK(k3.beta.norm() == 0.0);
  CHECK(k3.max_alpha_deviation <= 1e-10);

  su.set_forcing(ForcingTag::F3, p);
  CHECK_THROWS_AS(check_killing_identity(series, su.spec, su.b), ParameterError);
}

TEST_CASE("monotonicity under f3") {
  for (int sign : {-1, +1}) {
    Setup su(6);
    ForcingParams p;
    p.sign = sign;
    su.set_forcing(ForcingTag::F3, p);
    const SpectralState u0 = random_state(su.L, 6);
    const RunResult r = su.go(u0, 1.0, 1e-3, 50);
    Dynamics dyn(su.form, su.spec, su.b);
    const auto series = record_all(dyn, r.samples);
    const Direction dir = sign < 0 ? Direction::Nonincreasing : Direction::Nondecreasing;
    CHECK(check_monotonicity(series, dir).ok);
    const double expect = std::exp(sign * 1.0) * series.front().norm_uK;
    CHECK(std::abs(series.back().norm_uK - expect) < 1e-6);
  }
  // unforced: both directions hold
  Setup su(6);
  const RunResult r = su.go(random_state(su.L, 7), 1.0, 1e-2, 10);
  Dynamics dyn(su.form, su.spec, su.b);
  const auto series = record_all(dyn, r.samples);
  CHECK(check_monotonicity(series, Direction::Nonincreasing).ok);
  CHECK(check_monotonicity(series, Direction::Nondecreasing).ok);

  const MonotonicityReport bad = check_monotonicity(std::vector<double>{3, 2, 2.5, 1}, Direction::Nonincreasing);
  CHECK_FALSE(bad.ok);
  CHECK(bad.first_violation == 2);
}

TEST_CASE("continuous dependence") {
  Setup su(6);
  const SpectralState u0 = random_state(su.L, 8);
  const RunResult a = su.go(u0, 1.0, 1e-2, 5);
  CHECK_THROWS_AS(continuous_dependence_ratio(su.form, a.samples, a.samples, 1.0), ParameterError);

  // tiny amplitudes: linear contraction
  const SpectralState small = random_state(su.L, 9, 1e-6);
  SpectralState small2 = small;
  small2.coeffs += random_state(su.L, 10, 1e-8).coeffs;
  const DependenceReport lin =
      continuous_dependence_ratio(su.form, su.go(small, 1.0, 1e-2, 5).samples, su.go(small2, 1.0, 1e-2, 5).samples, 1.0);
  CHECK(lin.sup_ratio <= 1 + 1e-6);
  CHECK(lin.dissipation_difference > 0);

  const SpectralState big = random_state(su.L, 11, 3.0);
  const SpectralState dir = random_state(su.L, 12);
  std::vector<double> ratios;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    SpectralState v = big;
    v.coeffs += delta * dir.coeffs / dir.coeffs.norm();
    ratios.push_back(
        continuous_dependence_ratio(su.form, su.go(big, 1.0, 1e-2, 5).samples, su.go(v, 1.0, 1e-2, 5).samples, 1.0)
            .sup_ratio);
  }
  CHECK(ratio_spread(ratios) <= 2.0);
}

TEST_CASE("Lambda series") {
  Setup su(6);
  const SpectralState base = random_state(su.L, 13);
  const RunResult a = su.go(base, 1.0, 1e-2, 10);

  // Killing-only difference with f = 0
  SpectralState shifted = base;
  shifted.coeffs += killing_state(su.b, Eigen::Vector3d(0, 0.1, 0), su.L).coeffs;
  const LambdaSeries kl = lambda_series(su.form, su.go(shifted, 1.0, 1e-2, 10, false).samples,
                                        su.go(base, 1.0, 1e-2, 10, false).samples);
  CHECK(kl.truncated_at == -1);
  CHECK(kl.max_lambda < 1e-12);
  CHECK(kl.fit_residual == 0.0);
  CHECK(*std::max_element(kl.L.begin(), kl.L.end()) - *std::min_element(kl.L.begin(), kl.L.end()) < 1e-12);

  // single l = 2 difference in the linear dynamics
  SpectralState bumped = base;
  bumped(2, -1) += 0.01;
  const LambdaSeries l2 = lambda_series(su.form, su.go(bumped, 1.0, 1e-2, 10, false).samples,
                                        su.go(base, 1.0, 1e-2, 10, false).samples);
  for (double v : l2.lambda) CHECK(std::abs(v - su.form.lambda(2)) < 1e-10);
  // linear unforced dynamics: dL/dt = Lambda exactly
  CHECK(std::abs(l2.fit_b - 1.0) < 1e-6);
  CHECK(l2.fit_residual < 1e-6);
  CHECK(l2.line_residual < 1e-6);

  SpectralState near = base;
  near.coeffs += random_state(su.L, 14, 1e-3).coeffs;
  const LambdaSeries g = lambda_series(su.form, su.go(near, 1.0, 1e-2, 10).samples, a.samples);
  CHECK(g.truncated_at == -1);
  CHECK(std::isfinite(g.max_lambda));
  CHECK(g.fit_residual <= 0.05);
  MESSAGE("straight-line residual " << g.line_residual << ", structured residual " << g.fit_residual);

  const LambdaSeries same = lambda_series(su.form, a.samples, a.samples);
  CHECK(same.truncated_at == 0);
}
