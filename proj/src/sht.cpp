#include "surfns/sht.hpp"

#include "surfns/errors.hpp"

#include <cmath>
#include <numbers>

namespace surfns {

namespace {

const SphereTables& tables_for(const SurfaceGrid& grid, int lmax) {
  if (grid.kind != SurfaceKind::Sphere || !grid.sphere)
    throw GeometryError("spherical harmonic transform requires a sphere grid");
  if (lmax < 0 || lmax > grid.sphere->lmax)
    throw ParameterError("spherical harmonic transform: degree exceeds grid resolution");
  return *grid.sphere;
}

}  // namespace

void ring_fourier(const SurfaceGrid& grid, const double* nodal, int mmax, Eigen::MatrixXd& c,
                  Eigen::MatrixXd& s) {
  const auto& t = *grid.sphere;
  Eigen::Map<const RowMatrixXd> f(nodal, grid.n_lat, grid.n_lon);
  c.noalias() = f * t.cos_table.topRows(mmax + 1).transpose();
  s.noalias() = f * t.sin_table.topRows(mmax + 1).transpose();
}

Eigen::VectorXd ring_synthesis(const SurfaceGrid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto& t = *grid.sphere;
  const int mcount = static_cast<int>(a.cols());
  RowMatrixXd f = a * t.cos_table.topRows(mcount) + b * t.sin_table.topRows(mcount);
  return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

Eigen::VectorXd sht_analyze(const SurfaceGrid& grid, const ScalarField& f, int lmax) {
  const auto& t = tables_for(grid, lmax);
  if (f.size() != grid.size()) throw GridMismatchError("sht_analyze: field size does not match grid");
  Eigen::MatrixXd c, s;
  ring_fourier(grid, f.data(), lmax, c, s);
  const double dphi = 2.0 * std::numbers::pi / grid.n_lon;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(scalar_count(lmax));
  for (int m = 0; m <= lmax; ++m) {
    const auto p = t.legendre[m].value.leftCols(lmax - m + 1);
    const double norm = (m == 0 ? 1.0 : std::sqrt(2.0)) * dphi;
    const Eigen::VectorXd ac = norm * (p.transpose() * grid.ring_weights.cwiseProduct(c.col(m)));
    const Eigen::VectorXd as = norm * (p.transpose() * grid.ring_weights.cwiseProduct(s.col(m)));
    for (int l = m; l <= lmax; ++l) {
      out(scalar_index(l, m, false)) = ac(l - m);
      if (m > 0) out(scalar_index(l, m, true)) = as(l - m);
    }
  }
  return out;
}

ScalarField sht_synthesize(const SurfaceGrid& grid, const Eigen::VectorXd& coeffs, int lmax) {
  const auto& t = tables_for(grid, lmax);
  if (coeffs.size() != scalar_count(lmax)) throw GridMismatchError("sht_synthesize: coefficient count mismatch");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(grid.n_lat, lmax + 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(grid.n_lat, lmax + 1);
  for (int m = 0; m <= lmax; ++m) {
    const int nl = lmax - m + 1;
    Eigen::VectorXd cc(nl), cs(nl);
    const double norm = m == 0 ? 1.0 : std::sqrt(2.0);
    for (int l = m; l <= lmax; ++l) {
      cc(l - m) = norm * coeffs(scalar_index(l, m, false));
      cs(l - m) = m > 0 ? norm * coeffs(scalar_index(l, m, true)) : 0.0;
    }
    const auto p = t.legendre[m].value.leftCols(nl);
    a.col(m) = p * cc;
    b.col(m) = p * cs;
  }
  return ring_synthesis(grid, a, b);
}

Eigen::MatrixX2d sht_gradient(const SurfaceGrid& grid, const Eigen::VectorXd& coeffs, int lmax) {
  const auto& t = tables_for(grid, lmax);
  if (coeffs.size() != scalar_count(lmax)) throw GridMismatchError("sht_gradient: coefficient count mismatch");
  Eigen::MatrixXd at = Eigen::MatrixXd::Zero(grid.n_lat, lmax + 1), bt = at;
  Eigen::MatrixXd ap = at, bp = at;
  for (int m = 0; m <= lmax; ++m) {
    const int nl = lmax - m + 1;
    Eigen::VectorXd cc(nl), cs(nl);
    const double norm = m == 0 ? 1.0 : std::sqrt(2.0);
    for (int l = m; l <= lmax; ++l) {
      cc(l - m) = norm * coeffs(scalar_index(l, m, false));
      cs(l - m) = m > 0 ? norm * coeffs(scalar_index(l, m, true)) : 0.0;
    }
    const auto dp = t.legendre[m].dtheta.leftCols(nl);
    const auto mp = t.legendre[m].msin.leftCols(nl);
    at.col(m) = dp * cc;
    bt.col(m) = dp * cs;
    // (1/sin) d/dphi [A cos + B sin] = -mA/sin sin + mB/sin cos
    ap.col(m) = mp * cs;
    bp.col(m) = -(mp * cc);
  }
  Eigen::MatrixX2d g(grid.size(), 2);
  g.col(0) = ring_synthesis(grid, at, bt) / grid.radius;
  g.col(1) = ring_synthesis(grid, ap, bp) / grid.radius;
  return g;
}

}  // namespace surfns
