#pragma once

// Real scalar spherical-harmonic transforms on a Gauss-Legendre sphere grid.
//
// Coefficient layout (degree l = 0..lmax): index l*l holds m = 0; for m > 0,
// index l*l + 2m - 1 holds the cos(m phi) mode and l*l + 2m the sin(m phi)
// mode. Basis functions are orthonormal on the unit sphere:
//   Y_l0 = Pbar_l0, Y_lm^c = sqrt(2) Pbar_lm cos(m phi), Y_lm^s = sqrt(2) Pbar_lm sin(m phi).
// On a sphere of radius R the coefficients describe f(x) = sum a Y(x / R).

#include "surfns/grid.hpp"

#include <Eigen/Core>

namespace surfns {

inline constexpr int scalar_count(int lmax) { return (lmax + 1) * (lmax + 1); }

inline constexpr int scalar_index(int l, int m, bool sine) {
  return l * l + (m == 0 ? 0 : 2 * m - 1 + (sine ? 1 : 0));
}

Eigen::VectorXd sht_analyze(const SurfaceGrid& grid, const ScalarField& f, int lmax);
ScalarField sht_synthesize(const SurfaceGrid& grid, const Eigen::VectorXd& coeffs, int lmax);

/// Canonical-frame (e_theta, e_phi) components of the surface gradient of the
/// band-limited function with the given coefficients.
Eigen::MatrixX2d sht_gradient(const SurfaceGrid& grid, const Eigen::VectorXd& coeffs, int lmax);

/// Fourier sums over each latitude ring: C(j, m) = sum_k f_jk cos(m phi_k),
/// S(j, m) = sum_k f_jk sin(m phi_k), for m = 0..mmax.
void ring_fourier(const SurfaceGrid& grid, const double* nodal, int mmax, Eigen::MatrixXd& c,
                  Eigen::MatrixXd& s);

/// Inverse of ring_fourier given per-ring cosine/sine amplitudes (n_lat x (mmax+1)).
Eigen::VectorXd ring_synthesis(const SurfaceGrid& grid, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace surfns
