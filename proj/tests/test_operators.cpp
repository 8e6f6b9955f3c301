#include "doctest.h"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/operators.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace surfns;

namespace {

Eigen::VectorXd gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = n01(rng);
  return v;
}

ViscosityField tilted(const GridPtr& g, double a) {
  const double R = g->radius;
  return make_viscosity(g, [a, R](const Eigen::Vector3d& x) { return 1.0 + a * x(2) / R; }, 1);
}

}  // namespace

TEST_CASE("constant viscosity Stokes form") {
  const int L = 8;
  for (double R : {1.0, 2.0}) {
    auto g = build_sphere_grid(solver_grid_degree(L, 0), R);
    const StokesForm f = assemble_stokes(g, constant_viscosity(g, 1.0), L);
    CHECK(std::abs(f.lambda(1)) < 1e-10);
    for (int l = 1; l <= L; ++l) CHECK(std::abs(f.lambda(l) - (l * (l + 1) - 2.0) / (R * R)) < 1e-10 * (1 + f.lambda(l)));
    Eigen::MatrixXd off = f.A;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
    CHECK((f.A.diagonal() - f.D).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(f.A_prime.cwiseAbs().maxCoeff() < 1e-12);
    const StokesForm f3 = assemble_stokes(g, constant_viscosity(g, 3.0), L);
    CHECK((f3.A - 3.0 * f.A).cwiseAbs().maxCoeff() < 1e-12 * f3.A.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("variable viscosity Stokes form") {
  const int L = 8;
  auto g = build_sphere_grid(solver_grid_degree(L, 1), 1.0);
  const auto nu = tilted(g, 0.5);
  const StokesForm f = assemble_stokes(g, nu, L);
  CHECK((f.A - f.A.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * f.A.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.A);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  // kernel is exactly the l = 1 block
  CHECK(f.A.topRows(3).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(es.eigenvalues()(3) > 0.1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ep(f.A_prime);
  CHECK(ep.eigenvalues().minCoeff() > -1e-10);
  CHECK(f.nu_bar == doctest::Approx(nu.lower_bound));

  // quadratic form against direct quadrature of 2 nu |eps|^2
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralState s(L, gaussian(toroidal_count(L), rng));
    const TangentialTensor eps = rate_of_strain(synthesize(g, s));
    const double direct = 2.0 * g->weights.dot(nu.values.cwiseProduct(eps.comps.rowwise().squaredNorm()));
    const double form = s.coeffs.dot(stokes_apply(f, s).coeffs);
    CHECK(std::abs(form - direct) < 1e-10 * direct);
  }

  // Killing block never damped, l = 2 mode scaled by lambda_2 at nu = 1
  SpectralState k(L);
  k.coeffs.head<3>() = Eigen::Vector3d(1, -2, 0.5);
  CHECK(stokes_apply(f, k).coeffs.cwiseAbs().maxCoeff() < 1e-10);
  const StokesForm f1 = assemble_stokes(g, constant_viscosity(g, 1.0), L);
  SpectralState s20(L);
  s20(2, 0) = 1;
  const SpectralState out = stokes_apply(f1, s20);
  CHECK(std::abs(out(2, 0) - f1.lambda(2)) < 1e-12);
  CHECK((out.coeffs - f1.lambda(2) * s20.coeffs).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(assemble_stokes(build_sphere_grid(L, 1.0), constant_viscosity(build_sphere_grid(L, 1.0), 1.0), L),
                  GridMismatchError);
  auto small = build_sphere_grid(L, 1.0);
  CHECK_THROWS_AS(assemble_stokes(small, constant_viscosity(small, 1.0), L), ParameterError);
}

TEST_CASE("Stokes spectrum is invariant under rotations about the axis") {
  const int L = 6;
  auto g = build_sphere_grid(solver_grid_degree(L, 2), 1.0);
  auto nu_a = make_viscosity(g, [](const Eigen::Vector3d& x) { return 2.0 + 0.6 * x(0) + 0.3 * x(0) * x(1); }, 2);
  const double c = std::cos(0.7), s = std::sin(0.7);
  auto nu_b = make_viscosity(g, [c, s](const Eigen::Vector3d& x) {
    const Eigen::Vector3d y(c * x(0) - s * x(1), s * x(0) + c * x(1), x(2));
    return 2.0 + 0.6 * y(0) + 0.3 * y(0) * y(1);
  }, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(assemble_stokes(g, nu_a, L).A, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eb(assemble_stokes(g, nu_b, L).A, Eigen::EigenvaluesOnly);
  CHECK((ea.eigenvalues() - eb.eigenvalues()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("convective term") {
  const int L = 8;
  auto g = build_sphere_grid(solver_grid_degree(L, 0), 1.0);
  const KillingBasis b = killing_basis(g);
  CHECK(convective_term(g, SpectralState(L)).coeffs.cwiseAbs().maxCoeff() == 0.0);

  SpectralState k(L);
  k.coeffs.head<3>() = b.to_spectral.row(0).transpose();
  CHECK(std::abs(convective_term(g, k).coeffs.dot(k.coeffs)) < 1e-12);

  SpectralState z(L);
  z(2, 0) = 1;
  CHECK(convective_term(g, z).coeffs.cwiseAbs().maxCoeff() < 1e-9);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SpectralState s(L, gaussian(toroidal_count(L), rng));
    const SpectralState n = convective_term(g, s);
    const TangentialField u = synthesize(g, s);
    const double u2 = s.coeffs.squaredNorm();
    CHECK(std::abs(n.coeffs.dot(s.coeffs)) <= 1e-9 * u2 * h1_norm(u));
    // transport never feeds the Killing directions
    CHECK(n.coeffs.head<3>().cwiseAbs().maxCoeff() <= 1e-9 * u2 * h1_norm(u));
  }
}

TEST_CASE("convective term agrees with a brute-force nodal evaluation") {
  // Independent route: (u . grad) u = grad(|u|^2 / 2) + omega n x u, so the
  // Leray part equals that of omega n x u; omega is the synthesized vorticity.
  const int L = 6;
  auto g = build_sphere_grid(solver_grid_degree(L, 0), 1.3);
  std::mt19937_64 rng(12);
  const SpectralState s(L, gaussian(toroidal_count(L), rng));
  const ToroidalStrainTables tab = toroidal_strain_tables(*g, 1, L);
  const Eigen::VectorXd omega = tab.omega * s.coeffs;  // Laplacian of the stream function
  const TangentialField u = synthesize(g, s);
  // u = n x grad psi gives curl u = Laplacian psi, and omega n x u = (-omega u2, omega u1)
  Eigen::MatrixX2d r(g->size(), 2);
  r.col(0) = -omega.cwiseProduct(u.comps.col(1));
  r.col(1) = omega.cwiseProduct(u.comps.col(0));
  const SpectralState expect = leray_project(TangentialField(g, r), L);
  const SpectralState got = convective_term(g, s);
  CHECK((got.coeffs - expect.coeffs).cwiseAbs().maxCoeff() < 1e-10 * (1 + expect.coeffs.cwiseAbs().maxCoeff()));
}

TEST_CASE("semi-discrete energy identity") {
  const int L = 8;
  auto g = build_sphere_grid(solver_grid_degree(L, 1), 1.0);
  const auto nu = tilted(g, 0.5);
  const StokesForm form = assemble_stokes(g, nu, L);
  const KillingBasis b = killing_basis(g);
  ForcingParams p;
  p.L = L;
  p.sign = -1;
  SpectralState v(L);
  v(3, 1) = 0.7;
  p.field = v;
  const ForcingSpec spec = make_catalog_forcing(ForcingTag::F2, p, b);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const SpectralState s(L, gaussian(toroidal_count(L), rng));
    const Eigen::VectorXd rhs =
        -stokes_apply(form, s).coeffs - convective_term(g, s).coeffs + forcing_apply(spec, g, b, s).coeffs;
    const double dE = s.coeffs.dot(rhs);
    const TangentialField u = synthesize(g, s);
    const TangentialTensor eps = rate_of_strain(u);
    const double D = 2.0 * g->weights.dot(nu.values.cwiseProduct(eps.comps.rowwise().squaredNorm()));
    const TangentialField f = synthesize(g, forcing_apply(spec, g, b, s));
    const double W = l2_inner(f, u);
    CHECK(std::abs(dE - (-D + W)) < 1e-9 * (std::abs(D) + std::abs(W)));
  }
}
