#include "surfns/operators.hpp"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace surfns {

StokesForm assemble_stokes(const GridPtr& grid, const ViscosityField& nu, int L) {
  if (grid->kind != SurfaceKind::Sphere) throw GeometryError("assemble_stokes: time evolution is sphere-only");
  require_same_grid(grid, nu.grid, "assemble_stokes");
  if (!(nu.lower_bound > 0.0)) throw ParameterError("assemble_stokes: viscosity lower bound nu_* <= 0");
  const int need = L + (2 + nu.poly_degree) / 2;
  if (grid->degree < need)
    throw ParameterError("assemble_stokes: grid degree " + std::to_string(grid->degree) + " too small, need " +
                         std::to_string(need));

  const ToroidalStrainTables tab = toroidal_strain_tables(*grid, 1, L);
  StokesForm f;
  f.grid = grid;
  f.nu = nu;
  f.L = L;
  f.nu_bar = nu.lower_bound;
  // 2 nu eps:eps' = 4 nu (s s' + q q')
  const Eigen::VectorXd wn = 4.0 * grid->weights.cwiseProduct(nu.values);
  const Eigen::VectorXd wp = 4.0 * grid->weights.cwiseProduct((nu.values.array() - f.nu_bar).matrix());
  auto form = [&](const Eigen::VectorXd& w) {
    Eigen::MatrixXd a = blocked_gram(tab.s, w, tab.s) + blocked_gram(tab.q, w, tab.q);
    return Eigen::MatrixXd(0.5 * (a + a.transpose()));
  };
  f.A = form(wn);
  f.A_prime = form(wp);

  const Eigen::VectorXd w1 = 4.0 * grid->weights;
  const Eigen::VectorXd diag =
      (tab.s.cwiseAbs2().transpose() * w1) + (tab.q.cwiseAbs2().transpose() * w1);
  f.lambda = Eigen::VectorXd::Zero(L + 1);
  for (int l = 1; l <= L; ++l) f.lambda(l) = diag(toroidal_index(l, 0));
  f.D.resize(toroidal_count(L));
  for (int i = 0; i < toroidal_count(L); ++i) f.D(i) = f.lambda(toroidal_mode(i).l);

  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.A, Eigen::EigenvaluesOnly);
    f.a_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (f.A_prime.cwiseAbs().maxCoeff() > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(f.A_prime, Eigen::EigenvaluesOnly);
    f.a_prime_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return f;
}

SpectralState stokes_apply(const StokesForm& form, const SpectralState& s) {
  if (s.L != form.L) throw ParameterError("stokes_apply: truncation mismatch");
  return SpectralState(s.L, form.A * s.coeffs, s.t);
}

SpectralState convective_term(const GridPtr& grid, const SpectralState& s) {
  const TangentialField u = synthesize(grid, s);
  const TangentialTensor t = covariant_derivative(u);
  // ((u . grad) u)_a = T_ab u_b
  Eigen::MatrixX2d n(grid->size(), 2);
  n.col(0) = t.comps.col(0).cwiseProduct(u.comps.col(0)) + t.comps.col(1).cwiseProduct(u.comps.col(1));
  n.col(1) = t.comps.col(2).cwiseProduct(u.comps.col(0)) + t.comps.col(3).cwiseProduct(u.comps.col(1));
  SpectralState out = leray_project(TangentialField(grid, std::move(n)), s.L);
  out.t = s.t;
  return out;
}

SpectralState forcing_apply(const ForcingSpec& spec, const GridPtr& grid, const KillingBasis& basis,
                            const SpectralState& s) {
  if (s.L != spec.L) throw ParameterError("forcing_apply: truncation mismatch");
  SpectralState out(s.L);
  out.t = s.t;
  switch (spec.tag) {
    case ForcingTag::Zero:
      break;
    case ForcingTag::ConstantField:
    case ForcingTag::ConstantKilling:
      out.coeffs = spec.field;
      break;
    case ForcingTag::F2:
      out.coeffs = spec.field;
      out.coeffs.head<3>() += spec.sign * s.coeffs.head<3>();
      break;
    case ForcingTag::F3:
      out.coeffs = spec.sign * s.coeffs;
      break;
    case ForcingTag::F4:
      out.coeffs = s.coeffs;
      out.coeffs.head<3>() = spec.sign * (spec.weight * s.coeffs.head<3>());
      break;
    case ForcingTag::F5: {
      require_same_grid(grid, basis.grid, "forcing_apply");
      TangentialField u = synthesize(grid, s);
      const Eigen::VectorXd r = grid->points.rowwise().norm();
      u.comps.array().colwise() *= r.array();
      out = leray_project(u, s.L);
      out.coeffs.head<3>().setZero();
      out.coeffs -= s.coeffs;
      out.t = s.t;
      break;
    }
  }
  return out;
}

}  // namespace surfns
