#include "doctest.h"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/killing.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace surfns;
constexpr double pi = std::numbers::pi;

namespace {

Eigen::VectorXd gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Eigen::VectorXd v(n);
  for (auto& x : v) x = n01(rng);
  return v;
}

double strain_norm(const TangentialField& u) { return std::sqrt(tensor_l2_sq(rate_of_strain(u))); }

}  // namespace

TEST_CASE("sphere Killing basis") {
  auto g = build_sphere_grid(16, 1.0);
  const KillingBasis b = killing_basis(g);
  REQUIRE(b.dim() == 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) CHECK(std::abs(l2_inner(b.fields[i], b.fields[j]) - (i == j)) < 1e-12);
    CHECK(strain_norm(b.fields[i]) < 1e-10);
    CHECK(strain_norm(b.fields[i]) <= 1e-9 * h1_norm(b.fields[i]));
    // (e_j x x) sqrt(3 / (8 pi)) up to sign
    AmbientField rot(g->size(), 3);
    for (Eigen::Index n = 0; n < g->size(); ++n)
      rot.row(n) = Eigen::Vector3d::Unit(i).cross(Eigen::Vector3d(g->points.row(n))).transpose();
    const AmbientField expect = std::sqrt(3.0 / (8.0 * pi)) * rot;
    const AmbientField got = b.fields[i].ambient();
    const double err = std::min((got - expect).cwiseAbs().maxCoeff(), (got + expect).cwiseAbs().maxCoeff());
    CHECK(err < 1e-12);
  }
  // spectral map is orthogonal
  CHECK((b.to_spectral * b.to_spectral.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("torus Killing basis") {
  auto t = build_torus_grid(64, 64, 2.0, 0.5);
  const KillingBasis b = killing_basis(t);
  REQUIRE(b.dim() == 1);
  const auto& v = b.fields[0];
  CHECK(std::abs(l2_norm(v) - 1) < 1e-12);
  CHECK(v.comps.col(0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(strain_norm(v) <= 1e-9 * h1_norm(v));
}

TEST_CASE("projection onto Killing fields") {
  auto g = build_sphere_grid(12, 1.0);
  const KillingBasis b = killing_basis(g);
  const auto& v1 = b.fields[0];

  auto s1 = pk_project(b, v1);
  CHECK((s1.killing.comps - v1.comps).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s1.non_killing.comps.cwiseAbs().maxCoeff() < 1e-12);

  const auto phi20 = toroidal_basis_field(g, 2, 0);
  CHECK(pk_project(b, phi20).killing.comps.cwiseAbs().maxCoeff() < 1e-12);

  const auto u = 2.0 * v1 + phi20;
  const auto s = pk_project(b, u);
  CHECK(std::abs(l2_norm(s.killing) - 2) < 1e-12);
  CHECK(std::abs(l2_norm(s.non_killing) - 1) < 1e-12);

  std::mt19937_64 rng(1);
  const SpectralState r(8, gaussian(toroidal_count(8), rng));
  const auto ur = synthesize(g, r);
  const auto sr = pk_project(b, ur);
  CHECK(((sr.killing + sr.non_killing).comps - ur.comps).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& v : b.fields) CHECK(std::abs(l2_inner(sr.non_killing, v)) < 1e-10);
  CHECK(std::abs(l2_inner(ur, ur) - l2_inner(sr.killing, sr.killing) - l2_inner(sr.non_killing, sr.non_killing)) <
        1e-10 * l2_inner(ur, ur));
  const auto again = pk_project(b, sr.killing);
  CHECK((again.killing.comps - sr.killing.comps).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(again.non_killing.comps.cwiseAbs().maxCoeff() < 1e-12);

  // the l = 1 block carries exactly the Killing part
  const Eigen::VectorXd a_nodal = killing_coefficients(b, ur);
  const Eigen::VectorXd a_spec = killing_coefficients(b, r);
  CHECK((a_nodal - a_spec).cwiseAbs().maxCoeff() < 1e-12);
  const SpectralState ks = killing_state(b, a_spec, 8);
  CHECK((synthesize(g, ks).comps - sr.killing.comps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Killing coefficients") {
  auto g = build_sphere_grid(10, 1.0);
  const KillingBasis b = killing_basis(g);
  CHECK((killing_coefficients(b, b.fields[1]) - Eigen::Vector3d(0, 1, 0)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(killing_coefficients(b, TangentialField(g)).cwiseAbs().maxCoeff() == 0.0);
  const auto u = 3.0 * b.fields[0] - 4.0 * b.fields[2];
  CHECK(std::abs(killing_coefficients(b, u).norm() - 5) < 1e-12);
  CHECK_THROWS_AS(killing_coefficients(b, TangentialField(build_sphere_grid(10, 1.0))), GridMismatchError);
}

TEST_CASE("H1 and L2 norms are proportional on Killing fields") {
  auto g = build_sphere_grid(10, 1.0);
  const KillingBasis b = killing_basis(g);
  std::mt19937_64 rng(17);
  double lo = 1e300, hi = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd a = gaussian(3, rng).normalized();
    TangentialField v(g);
    for (int j = 0; j < 3; ++j) v += a(j) * b.fields[j];
    const double ratio = h1_norm(v) / l2_norm(v);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi - lo < 1e-8 * hi);
}

TEST_CASE("Korn constant on the sphere") {
  auto g = build_sphere_grid(8, 1.0);
  // strain form vanishes on the degree-one block
  const auto tab = toroidal_strain_tables(*g, 1, 3);
  for (int c = 0; c < 3; ++c)
    CHECK(std::sqrt(g->weights.dot(2 * tab.s.col(c).cwiseAbs2() + 2 * tab.q.col(c).cwiseAbs2())) < 1e-10);

  const KornResult k8 = korn_constant(g, 8);
  // For the orthonormal toroidal basis on the unit sphere:
  // ||Phi_l||_H1^2 = l(l+1), ||eps||^2 = (l(l+1) - 2) / 2, maximized at l = 2.
  double oracle = 0;
  for (int l = 2; l <= 8; ++l) oracle = std::max(oracle, 2.0 * l * (l + 1) / (l * (l + 1) - 2.0));
  CHECK(std::abs(k8.constant - std::sqrt(oracle)) < 1e-10);
  CHECK(k8.degree_quotients.size() == 7);
  CHECK(std::abs(k8.degree_quotients[0] - 3.0) < 1e-10);

  const KornResult k16 = korn_constant(g, 16);
  const KornResult k32 = korn_constant(g, 32);
  CHECK(std::abs(k16.constant - k32.constant) <= 0.01 * k32.constant);
  CHECK_THROWS_AS(korn_constant(g, 1), ParameterError);

  // direct inequality on random non-Killing samples
  auto gs = build_sphere_grid(17, 1.0);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    SpectralState s(16, gaussian(toroidal_count(16), rng));
    s.coeffs.head<3>().setZero();
    const auto v = synthesize(gs, s);
    CHECK(h1_norm(v) <= (1 + 1e-8) * k16.constant * strain_norm(v));
  }
}

TEST_CASE("Korn constant on the torus") {
  auto t = build_torus_grid(32, 32, 2.0, 0.5);
  const KornResult k = korn_constant(t, 3);
  CHECK(k.basis_size == 7 * 7 - 1 + 2);
  CHECK(std::isfinite(k.constant));
  CHECK(k.constant > 1.0);
  const KornResult k4 = korn_constant(t, 4);
  CHECK(k4.constant >= k.constant * (1 - 1e-10));
}

TEST_CASE("strain kernel dimension") {
  CHECK(strain_kernel_dimension(build_sphere_grid(8, 1.0), 6) == 3);
  CHECK(strain_kernel_dimension(build_sphere_grid(8, 2.5), 6) == 3);
  auto t = build_torus_grid(32, 32, 2.0, 0.5);
  CHECK(strain_kernel_dimension(t, 8) == 1);
  // the rotation is not a trigonometric stream function; low K only approximates it
  CHECK(strain_kernel_dimension(t, 4, 1e-8) == 1);
}
