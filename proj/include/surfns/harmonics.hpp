#pragma once

// Divergence-free (toroidal) vector spherical harmonics.
//
//   Phi_lm = n x grad_G Y_lm / sqrt(l(l+1)),   1 <= l <= L
//
// Real storage: degree l occupies 2l+1 consecutive slots starting at l*l - 1,
// ordered m = 0, then (cos, sin) for m = 1..l. Signed orders address the same
// slots: m > 0 is the cosine mode and m < 0 the sine mode of order |m|. The
// first three slots (l = 1) hold the Killing component.

#include "surfns/grid.hpp"

#include <Eigen/Core>

#include <complex>

namespace surfns {

inline constexpr int toroidal_count(int L) { return L * L + 2 * L; }

/// Slot of the real mode (l, m) with signed order m.
int toroidal_index(int l, int m);

struct ModeId {
  int l = 1;
  int m = 0;  // signed: > 0 cosine, < 0 sine
};
ModeId toroidal_mode(int index);

struct SpectralState {
  int L = 0;
  Eigen::VectorXd coeffs;
  double t = 0.0;

  SpectralState() = default;
  explicit SpectralState(int degree);
  SpectralState(int degree, Eigen::VectorXd c, double time = 0.0);

  double& operator()(int l, int m) { return coeffs(toroidal_index(l, m)); }
  double operator()(int l, int m) const { return coeffs(toroidal_index(l, m)); }

  /// Complex coefficient for Pbar_lm e^{i m phi} (m >= 0) and its partner
  /// (-1)^m Pbar_lm e^{-i m phi} (m < 0); satisfies c_{l,-m} = (-1)^m conj(c_lm).
  std::complex<double> complex_coeff(int l, int m) const;

  Eigen::Vector3d killing_block() const { return coeffs.head<3>(); }
  double norm() const { return coeffs.norm(); }
};

/// Toroidal and spheroidal (gradient) coefficients of a tangential field.
struct VectorCoeffs {
  Eigen::VectorXd toroidal;
  Eigen::VectorXd spheroidal;
};

/// Quadrature projection onto Phi_lm and Psi_lm = grad_G Y_lm / sqrt(l(l+1)).
/// Input components are in the canonical (e_theta, e_phi) frame.
VectorCoeffs vector_analyze(const SurfaceGrid& grid, const Eigen::MatrixX2d& comps, int L);

/// Canonical-frame components of sum tor * Phi + sph * Psi; `sph` may be null.
Eigen::MatrixX2d vector_synthesize(const SurfaceGrid& grid, const Eigen::VectorXd& tor,
                                   const Eigen::VectorXd* sph, int L);

TangentialField toroidal_basis_field(const GridPtr& grid, int l, int m);

SpectralState analyze(const TangentialField& u, int L);
TangentialField synthesize(const GridPtr& grid, const SpectralState& s);

/// Divergence-free part of v in coefficient form (the gradient part is dropped).
SpectralState leray_project(const TangentialField& v, int L);

struct GridResolution {
  int degree = 0;
  int n_lat = 0;
  int n_lon = 0;
};

/// Resolution integrating quadratic nonlinearities of degree-L fields exactly.
GridResolution dealias_rule(int L);

/// Grid degree used by the solver: dealiased nonlinearity, exact strain form
/// with a viscosity of polynomial degree nu_degree, exact ambient derivatives.
int solver_grid_degree(int L, int nu_degree);

/// Nodal strain data of Phi_lm for lmin <= l <= L, column c <-> slot
/// toroidal_index - (lmin*lmin - 1). In the canonical frame the strain is
/// [[-q, s], [s, q]] and the scalar vorticity is omega.
struct ToroidalStrainTables {
  int lmin = 1;
  int L = 0;
  Eigen::MatrixXd s;
  Eigen::MatrixXd q;
  Eigen::MatrixXd omega;
};

ToroidalStrainTables toroidal_strain_tables(const SurfaceGrid& grid, int lmin, int L);

}  // namespace surfns
