#include "surfns/differential.hpp"

#include "surfns/errors.hpp"
#include "surfns/sht.hpp"

#include <cmath>

namespace surfns {

namespace {

// Gradient components in the canonical coordinate frame.
Eigen::MatrixX2d canonical_gradient(const SurfaceGrid& g, const ScalarField& p) {
  if (p.size() != g.size()) throw GridMismatchError("surface_gradient: field size does not match grid");
  if (g.kind == SurfaceKind::Sphere) {
    const Eigen::VectorXd a = sht_analyze(g, p, g.degree);
    return sht_gradient(g, a, g.degree);
  }
  const auto& t = *g.torus;
  Eigen::Map<const RowMatrixXd> f(p.data(), g.n_lat, g.n_lon);
  RowMatrixXd dphi = t.d_pol * f;
  RowMatrixXd dtheta = f * t.d_tor.transpose();
  Eigen::MatrixX2d out(g.size(), 2);
  for (int j = 0; j < g.n_lat; ++j) {
    const double rho = g.radius + g.minor_radius * std::cos(g.lat_angles(j));
    for (int k = 0; k < g.n_lon; ++k) {
      out(g.index(j, k), 0) = dphi(j, k) / g.minor_radius;
      out(g.index(j, k), 1) = dtheta(j, k) / rho;
    }
  }
  return out;
}

}  // namespace

TangentialField surface_gradient(const GridPtr& grid, const ScalarField& p) {
  return {grid, canonical_to_frame(*grid, canonical_gradient(*grid, p))};
}

TangentialTensor covariant_derivative(const TangentialField& u) {
  const SurfaceGrid& g = *u.grid;
  const AmbientField U = u.ambient();
  TangentialTensor t;
  t.grid = u.grid;
  t.comps = Eigen::Matrix<double, Eigen::Dynamic, 4>::Zero(g.size(), 4);
  for (int c = 0; c < 3; ++c) {
    const Eigen::MatrixX2d d = canonical_to_frame(g, canonical_gradient(g, U.col(c)));
    // T_ab += e_a[c] * d_b U_c
    t.comps.col(0).array() += g.e1.col(c).array() * d.col(0).array();
    t.comps.col(1).array() += g.e1.col(c).array() * d.col(1).array();
    t.comps.col(2).array() += g.e2.col(c).array() * d.col(0).array();
    t.comps.col(3).array() += g.e2.col(c).array() * d.col(1).array();
  }
  return t;
}

ScalarField surface_divergence(const TangentialField& u) {
  const TangentialTensor t = covariant_derivative(u);
  return t.comps.col(0) + t.comps.col(3);
}

TangentialTensor rate_of_strain(const TangentialField& u) {
  TangentialTensor t = covariant_derivative(u);
  const Eigen::VectorXd off = 0.5 * (t.comps.col(1) + t.comps.col(2));
  t.comps.col(1) = off;
  t.comps.col(2) = off;
  t.symmetric = true;
  return t;
}

double tensor_l2_sq(const TangentialTensor& t) {
  return t.grid->weights.dot(t.comps.rowwise().squaredNorm());
}

double h1_norm(const TangentialField& u) {
  const double v = l2_inner(u, u);
  return std::sqrt(v + tensor_l2_sq(covariant_derivative(u)));
}

}  // namespace surfns
