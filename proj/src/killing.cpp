#include "surfns/killing.hpp"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"
#include "surfns/parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace surfns {

namespace {

TangentialField rotation_about(const GridPtr& g, const Eigen::Vector3d& axis) {
  AmbientField v(g->size(), 3);
  for (Eigen::Index i = 0; i < g->size(); ++i) v.row(i) = axis.cross(Eigen::Vector3d(g->points.row(i))).transpose();
  return tangential_project(g, v);
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest eigenvalue of H x = mu E x; E must be positive definite.
double largest_generalized(const Eigen::MatrixXd& H, const Eigen::MatrixXd& E) {
  Eigen::LLT<Eigen::MatrixXd> llt(E);
  if (llt.info() != Eigen::Success)
    throw ConsistencyError("korn_constant: strain form is singular on the non-Killing space (Killing mode leaked)");
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(H, E, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConsistencyError("korn_constant: generalized eigensolver failed");
  return es.eigenvalues().maxCoeff();
}

KornResult korn_sphere(const SurfaceGrid& base, int L) {
  if (L < 2 || L > 64) throw ParameterError("korn_constant: L must lie in [2, 64], got " + std::to_string(L));
  // |eps|^2 and |grad v|^2 have degree <= 2L + 2: exact on a degree L + 1 grid.
  const GridPtr g = build_sphere_grid(L + 1, base.radius);
  const ToroidalStrainTables tab = toroidal_strain_tables(*g, 2, L);
  const Eigen::VectorXd& w = g->weights;
  const Eigen::MatrixXd E = symmetrized(2.0 * (blocked_gram(tab.s, w, tab.s) + blocked_gram(tab.q, w, tab.q)));
  const Eigen::MatrixXd G = E + 0.5 * symmetrized(blocked_gram(tab.omega, w, tab.omega));
  const Eigen::MatrixXd H = Eigen::MatrixXd::Identity(E.rows(), E.cols()) + G;

  KornResult r;
  r.L = L;
  r.basis_size = static_cast<int>(E.rows());
  for (int l = 2; l <= L; ++l) {
    const int c = toroidal_index(l, 0) - 3;
    r.degree_quotients.push_back(H(c, c) / E(c, c));
  }
  r.constant = std::sqrt(largest_generalized(H, E));
  return r;
}

// Divergence-free fields on the torus: n x grad psi for psi = trig(a phi) trig(b theta),
// a, b <= K, plus the harmonic fields e1 / rho and e2 / rho.
std::vector<TangentialField> torus_divfree_fields(const GridPtr& g, int K) {
  if (K < 1 || 4 * K > std::min(g->n_lat, g->n_lon))
    throw ParameterError("korn_constant: torus Fourier degree must satisfy 1 <= 4K <= min(n_pol, n_tor)");
  std::vector<TangentialField> fields;
  for (int a = 0; a <= K; ++a)
    for (int b = 0; b <= K; ++b)
      for (int sa = 0; sa < (a ? 2 : 1); ++sa)
        for (int sb = 0; sb < (b ? 2 : 1); ++sb) {
          if (a == 0 && b == 0) continue;
          ScalarField psi(g->size());
          for (int j = 0; j < g->n_lat; ++j)
            for (int k = 0; k < g->n_lon; ++k) {
              const double fa = sa ? std::sin(a * g->lat_angles(j)) : std::cos(a * g->lat_angles(j));
              const double fb = sb ? std::sin(b * g->lon_angles(k)) : std::cos(b * g->lon_angles(k));
              psi(g->index(j, k)) = fa * fb;
            }
          const TangentialField grad = surface_gradient(g, psi);
          Eigen::MatrixX2d c(g->size(), 2);
          c.col(0) = -grad.comps.col(1);
          c.col(1) = grad.comps.col(0);
          fields.emplace_back(g, c);
        }
  for (int comp = 0; comp < 2; ++comp) {
    Eigen::MatrixX2d c = Eigen::MatrixX2d::Zero(g->size(), 2);
    for (int j = 0; j < g->n_lat; ++j)
      for (int k = 0; k < g->n_lon; ++k)
        c(g->index(j, k), comp) = 1.0 / (g->radius + g->minor_radius * std::cos(g->lat_angles(j)));
    fields.emplace_back(g, c);
  }
  return fields;
}

struct TorusGrams {
  Eigen::MatrixXd M, G, E;
};

TorusGrams torus_grams(const GridPtr& g, const std::vector<TangentialField>& fields) {
  const Eigen::Index n = static_cast<Eigen::Index>(fields.size());
  const Eigen::Index N = g->size();
  Eigen::MatrixXd U(N * 2, n), Dg(N * 4, n), Ds(N * 4, n);
  parallel_for(fields.size(), [&](std::size_t i) {
    const auto& f = fields[i];
    const TangentialTensor t = covariant_derivative(f);
    const TangentialTensor e = rate_of_strain(f);
    U.col(i) << f.comps.col(0), f.comps.col(1);
    Dg.col(i) << t.comps.col(0), t.comps.col(1), t.comps.col(2), t.comps.col(3);
    Ds.col(i) << e.comps.col(0), e.comps.col(1), e.comps.col(2), e.comps.col(3);
  });
  const Eigen::VectorXd w2 = g->weights.replicate(2, 1), w4 = g->weights.replicate(4, 1);
  return {symmetrized(blocked_gram(U, w2, U)), symmetrized(blocked_gram(Dg, w4, Dg)),
          symmetrized(blocked_gram(Ds, w4, Ds))};
}

KornResult korn_torus(const GridPtr& g, int K) {
  const KillingBasis kb = killing_basis(g);
  std::vector<TangentialField> fields = torus_divfree_fields(g, K);
  for (auto& f : fields)
    for (const auto& v : kb.fields) f -= l2_inner(f, v) * v;
  const auto [M, G, E] = torus_grams(g, fields);
  const Eigen::MatrixXd H = M + G;
  const Eigen::Index n = static_cast<Eigen::Index>(fields.size());

  KornResult r;
  r.L = K;
  r.basis_size = static_cast<int>(n);
  for (Eigen::Index i = 0; i < n; ++i) r.degree_quotients.push_back(H(i, i) / E(i, i));
  r.constant = std::sqrt(largest_generalized(H, E));
  return r;
}

}  // namespace

KillingBasis killing_basis(const GridPtr& grid) {
  KillingBasis b;
  b.grid = grid;
  if (grid->kind == SurfaceKind::Sphere) {
    b.provenance = "sphere: Gram-Schmidt of P(e_k x x), k = 1, 2, 3";
    for (int k = 0; k < 3; ++k) {
      TangentialField f = rotation_about(grid, Eigen::Vector3d::Unit(k));
      for (const auto& v : b.fields) f -= l2_inner(f, v) * v;
      f *= 1.0 / l2_norm(f);
      b.fields.push_back(std::move(f));
    }
    if (grid->degree >= 1) {
      for (int k = 0; k < 3; ++k) {
        const TangentialField phi = toroidal_basis_field(grid, 1, toroidal_mode(k).m);
        for (int j = 0; j < 3; ++j) b.to_spectral(j, k) = l2_inner(b.fields[j], phi);
      }
    }
  } else if (grid->kind == SurfaceKind::Torus) {
    b.provenance = "torus: normalized azimuthal rotation e3 x x";
    TangentialField f = rotation_about(grid, Eigen::Vector3d::UnitZ());
    f *= 1.0 / l2_norm(f);
    b.fields.push_back(std::move(f));
  } else {
    throw GeometryError("killing_basis: unsupported geometry");
  }
  return b;
}

KillingSplit pk_project(const KillingBasis& basis, const TangentialField& u) {
  require_same_grid(basis.grid, u.grid, "pk_project");
  TangentialField k(u.grid);
  for (const auto& v : basis.fields) k += l2_inner(u, v) * v;
  return {k, u - k};
}

Eigen::VectorXd killing_coefficients(const KillingBasis& basis, const TangentialField& u) {
  require_same_grid(basis.grid, u.grid, "killing_coefficients");
  Eigen::VectorXd a(basis.dim());
  for (int j = 0; j < basis.dim(); ++j) a(j) = l2_inner(u, basis.fields[j]);
  return a;
}

Eigen::VectorXd killing_coefficients(const KillingBasis& basis, const SpectralState& s) {
  if (basis.grid->kind != SurfaceKind::Sphere) throw GeometryError("spectral Killing coefficients require the sphere");
  return basis.to_spectral * s.killing_block();
}

SpectralState killing_state(const KillingBasis& basis, const Eigen::VectorXd& alpha, int L) {
  if (basis.grid->kind != SurfaceKind::Sphere) throw GeometryError("spectral Killing coefficients require the sphere");
  if (alpha.size() != 3) throw ParameterError("killing_state: expected three coefficients");
  SpectralState s(L);
  s.coeffs.head<3>() = basis.to_spectral.transpose() * alpha;
  return s;
}

KornResult korn_constant(const GridPtr& grid, int L) {
  if (grid->kind == SurfaceKind::Sphere) return korn_sphere(*grid, L);
  return korn_torus(grid, L);
}

int strain_kernel_dimension(const GridPtr& grid, int K, double rel_tol) {
  Eigen::VectorXd ev;
  if (grid->kind == SurfaceKind::Sphere) {
    if (K < 1 || K > 64) throw ParameterError("strain_kernel_dimension: K must lie in [1, 64]");
    const GridPtr g = build_sphere_grid(K + 1, grid->radius);
    const ToroidalStrainTables tab = toroidal_strain_tables(*g, 1, K);
    const Eigen::MatrixXd E = symmetrized(blocked_gram(tab.s, g->weights, tab.s) + blocked_gram(tab.q, g->weights, tab.q));
    ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(E, Eigen::EigenvaluesOnly).eigenvalues();
  } else {
    const auto [M, G, E] = torus_grams(grid, torus_divfree_fields(grid, K));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(E, M, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConsistencyError("strain_kernel_dimension: eigensolver failed");
    ev = es.eigenvalues();
  }
  const double top = ev.cwiseAbs().maxCoeff();
  return static_cast<int>((ev.array().abs() <= rel_tol * top).count());
}

}  // namespace surfns
