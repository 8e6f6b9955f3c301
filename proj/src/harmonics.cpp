#include "surfns/harmonics.hpp"

#include "surfns/errors.hpp"
#include "surfns/sht.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace surfns {

namespace {

const SphereTables& sphere_tables(const SurfaceGrid& grid, int L) {
  if (grid.kind != SurfaceKind::Sphere || !grid.sphere)
    throw GeometryError("vector spherical harmonics require a sphere grid");
  if (L < 1 || L > grid.sphere->lmax)
    throw ParameterError("vector harmonic degree " + std::to_string(L) + " exceeds grid degree " +
                         std::to_string(grid.sphere->lmax));
  return *grid.sphere;
}

inline int slot(int l, int m, bool sine) { return l * l - 1 + (m == 0 ? 0 : 2 * m - 1 + (sine ? 1 : 0)); }

}  // namespace

int toroidal_index(int l, int m) {
  if (l < 1) throw ParameterError("toroidal mode requires l >= 1 (no toroidal field of degree 0)");
  if (std::abs(m) > l) throw ParameterError("toroidal mode requires |m| <= l");
  return slot(l, std::abs(m), m < 0);
}

ModeId toroidal_mode(int index) {
  if (index < 0) throw ParameterError("toroidal_mode: negative index");
  const int l = static_cast<int>(std::sqrt(double(index + 1)));
  int ll = l;
  while (ll * ll - 1 > index) --ll;
  while ((ll + 1) * (ll + 1) - 1 <= index) ++ll;
  const int r = index - (ll * ll - 1);
  if (r == 0) return {ll, 0};
  const int m = (r + 1) / 2;
  return {ll, (r % 2 == 1) ? m : -m};
}

SpectralState::SpectralState(int degree) : L(degree), coeffs(Eigen::VectorXd::Zero(toroidal_count(degree))) {
  if (degree < 1) throw ParameterError("SpectralState: L must be >= 1");
}

SpectralState::SpectralState(int degree, Eigen::VectorXd c, double time) : L(degree), coeffs(std::move(c)), t(time) {
  if (coeffs.size() != toroidal_count(degree)) throw ParameterError("SpectralState: coefficient count mismatch");
}

std::complex<double> SpectralState::complex_coeff(int l, int m) const {
  const int am = std::abs(m);
  if (am == 0) return {(*this)(l, 0), 0.0};
  const double a = coeffs(slot(l, am, false)), b = coeffs(slot(l, am, true));
  const std::complex<double> c(a / std::sqrt(2.0), -b / std::sqrt(2.0));
  if (m > 0) return c;
  return (am % 2 == 0 ? 1.0 : -1.0) * std::conj(c);
}

VectorCoeffs vector_analyze(const SurfaceGrid& grid, const Eigen::MatrixX2d& comps, int L) {
  const auto& t = sphere_tables(grid, L);
  if (comps.rows() != grid.size()) throw GridMismatchError("vector_analyze: field size does not match grid");
  const Eigen::VectorXd uth = comps.col(0), uph = comps.col(1);
  Eigen::MatrixXd ct, st, cp, sp;
  ring_fourier(grid, uth.data(), L, ct, st);
  ring_fourier(grid, uph.data(), L, cp, sp);
  const double dphi = 2.0 * std::numbers::pi / grid.n_lon;
  VectorCoeffs out{Eigen::VectorXd::Zero(toroidal_count(L)), Eigen::VectorXd::Zero(toroidal_count(L))};
  const Eigen::VectorXd& w = grid.ring_weights;
  for (int m = 0; m <= L; ++m) {
    const int l0 = std::max(m, 1);
    const int nl = L - l0 + 1;
    const auto dp = t.legendre[m].dtheta.middleCols(l0 - m, nl);
    const auto mp = t.legendre[m].msin.middleCols(l0 - m, nl);
    const Eigen::VectorXd wct = w.cwiseProduct(ct.col(m)), wst = w.cwiseProduct(st.col(m));
    const Eigen::VectorXd wcp = w.cwiseProduct(cp.col(m)), wsp = w.cwiseProduct(sp.col(m));
    Eigen::VectorXd tc = mp.transpose() * wst + dp.transpose() * wcp;
    Eigen::VectorXd sc = dp.transpose() * wct - mp.transpose() * wsp;
    Eigen::VectorXd ts, ss;
    if (m > 0) {
      ts = -(mp.transpose() * wct) + dp.transpose() * wsp;
      ss = dp.transpose() * wst + mp.transpose() * wcp;
    }
    const double norm = (m == 0 ? 1.0 : std::sqrt(2.0)) * dphi * grid.radius;
    for (int l = l0; l <= L; ++l) {
      const double k = norm / std::sqrt(double(l) * (l + 1));
      out.toroidal(slot(l, m, false)) = k * tc(l - l0);
      out.spheroidal(slot(l, m, false)) = k * sc(l - l0);
      if (m > 0) {
        out.toroidal(slot(l, m, true)) = k * ts(l - l0);
        out.spheroidal(slot(l, m, true)) = k * ss(l - l0);
      }
    }
  }
  return out;
}

Eigen::MatrixX2d vector_synthesize(const SurfaceGrid& grid, const Eigen::VectorXd& tor, const Eigen::VectorXd* sph,
                                   int L) {
  const auto& t = sphere_tables(grid, L);
  if (tor.size() != toroidal_count(L) || (sph && sph->size() != toroidal_count(L)))
    throw GridMismatchError("vector_synthesize: coefficient count mismatch");
  const int nlat = grid.n_lat;
  Eigen::MatrixXd ath = Eigen::MatrixXd::Zero(nlat, L + 1), bth = ath, aph = ath, bph = ath;
  for (int m = 0; m <= L; ++m) {
    const int l0 = std::max(m, 1);
    const int nl = L - l0 + 1;
    Eigen::VectorXd tc(nl), ts(nl), sc(nl), ss(nl);
    const double norm = (m == 0 ? 1.0 : std::sqrt(2.0)) / grid.radius;
    for (int l = l0; l <= L; ++l) {
      const double k = norm / std::sqrt(double(l) * (l + 1));
      tc(l - l0) = k * tor(slot(l, m, false));
      ts(l - l0) = m > 0 ? k * tor(slot(l, m, true)) : 0.0;
      sc(l - l0) = sph ? k * (*sph)(slot(l, m, false)) : 0.0;
      ss(l - l0) = (sph && m > 0) ? k * (*sph)(slot(l, m, true)) : 0.0;
    }
    const auto dp = t.legendre[m].dtheta.middleCols(l0 - m, nl);
    const auto mp = t.legendre[m].msin.middleCols(l0 - m, nl);
    ath.col(m) = dp * sc - mp * ts;
    bth.col(m) = mp * tc + dp * ss;
    aph.col(m) = dp * tc + mp * ss;
    bph.col(m) = dp * ts - mp * sc;
  }
  Eigen::MatrixX2d out(grid.size(), 2);
  out.col(0) = ring_synthesis(grid, ath, bth);
  out.col(1) = ring_synthesis(grid, aph, bph);
  return out;
}

TangentialField toroidal_basis_field(const GridPtr& grid, int l, int m) {
  const int idx = toroidal_index(l, m);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(toroidal_count(l));
  c(idx) = 1.0;
  return {grid, canonical_to_frame(*grid, vector_synthesize(*grid, c, nullptr, l))};
}

SpectralState analyze(const TangentialField& u, int L) {
  const VectorCoeffs vc = vector_analyze(*u.grid, frame_to_canonical(*u.grid, u.comps), L);
  return SpectralState(L, vc.toroidal);
}

TangentialField synthesize(const GridPtr& grid, const SpectralState& s) {
  return {grid, canonical_to_frame(*grid, vector_synthesize(*grid, s.coeffs, nullptr, s.L))};
}

SpectralState leray_project(const TangentialField& v, int L) { return analyze(v, L); }

GridResolution dealias_rule(int L) {
  if (L < 1) throw ParameterError("dealias_rule: L must be >= 1");
  GridResolution r;
  r.degree = (3 * L + 1) / 2;
  r.n_lat = r.degree + 1;
  r.n_lon = 2 * r.degree + 2;
  return r;
}

int solver_grid_degree(int L, int nu_degree) {
  const int strain = L + (2 + nu_degree) / 2;  // ceil((2L + 1 + nu_degree) / 2)
  return std::max({dealias_rule(L).degree, L + 1, strain});
}

ToroidalStrainTables toroidal_strain_tables(const SurfaceGrid& grid, int lmin, int L) {
  const auto& t = sphere_tables(grid, L);
  if (lmin < 1 || lmin > L) throw ParameterError("toroidal_strain_tables: invalid degree range");
  const int offset = lmin * lmin - 1;
  const int ncols = toroidal_count(L) - offset;
  ToroidalStrainTables out;
  out.lmin = lmin;
  out.L = L;
  out.s = Eigen::MatrixXd::Zero(grid.size(), ncols);
  out.q = out.s;
  out.omega = out.s;
  const double r2 = grid.radius * grid.radius;
  for (int m = 0; m <= L; ++m) {
    const auto& col = t.legendre[m];
    const double norm = m == 0 ? 1.0 : std::sqrt(2.0);
    for (int l = std::max({lmin, m, 1}); l <= L; ++l) {
      const double ll = double(l) * (l + 1);
      const double c = norm / std::sqrt(ll) / r2;
      const int cc = slot(l, m, false) - offset;
      const int cs = slot(l, m, true) - offset;
      for (int j = 0; j < grid.n_lat; ++j) {
        const double th = grid.lat_angles(j);
        const double sn = std::sin(th), cot = std::cos(th) / sn;
        const double P = col.value(j, l - m), dP = col.dtheta(j, l - m), mP = col.msin(j, l - m);
        const double half_bracket = 0.5 * (-2.0 * cot * dP - ll * P + 2.0 * m * mP / sn);
        const double h = m * dP / sn - cot * mP;
        for (int k = 0; k < grid.n_lon; ++k) {
          const Eigen::Index i = grid.index(j, k);
          const double cm = t.cos_table(m, k), sm = t.sin_table(m, k);
          out.s(i, cc) = c * half_bracket * cm;
          out.q(i, cc) = -c * h * sm;
          out.omega(i, cc) = -ll * c * P * cm;
          if (m > 0) {
            out.s(i, cs) = c * half_bracket * sm;
            out.q(i, cs) = c * h * cm;
            out.omega(i, cs) = -ll * c * P * sm;
          }
        }
      }
    }
  }
  return out;
}

}  // namespace surfns
