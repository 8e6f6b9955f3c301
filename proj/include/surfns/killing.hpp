#pragma once

// Killing fields (rigid motions of the surface), the orthogonal projector onto
// them, and discrete Korn constants.

#include "surfns/grid.hpp"
#include "surfns/harmonics.hpp"

#include <string>
#include <vector>

namespace surfns {

struct KillingBasis {
  GridPtr grid;
  std::vector<TangentialField> fields;  // L2-orthonormal
  std::string provenance;
  // Sphere only: v_j = sum_k to_spectral(j, k) Phi_{1,k} (slots of the l = 1 block).
  Eigen::Matrix3d to_spectral = Eigen::Matrix3d::Zero();

  int dim() const { return static_cast<int>(fields.size()); }
};

/// Sphere: Gram-Schmidt of P(e_k x x), k = 1, 2, 3. Torus: the normalized
/// azimuthal rotation e3 x x. The torus dimension is fixed to one.
KillingBasis killing_basis(const GridPtr& grid);

struct KillingSplit {
  TangentialField killing;
  TangentialField non_killing;
};

KillingSplit pk_project(const KillingBasis& basis, const TangentialField& u);

/// alpha_j = (u, v_j).
Eigen::VectorXd killing_coefficients(const KillingBasis& basis, const TangentialField& u);
/// Same, from spectral coefficients (sphere).
Eigen::VectorXd killing_coefficients(const KillingBasis& basis, const SpectralState& s);
/// Spectral coefficients of sum alpha_j v_j (sphere).
SpectralState killing_state(const KillingBasis& basis, const Eigen::VectorXd& alpha, int L);

struct KornResult {
  int L = 0;
  double constant = 0.0;  // C_P = sqrt of the largest generalized eigenvalue
  // Sphere: ||Phi_l0||_H1^2 / ||eps(Phi_l0)||^2 for l = 2..L (index l - 2).
  // Torus: one entry per basis field.
  std::vector<double> degree_quotients;
  int basis_size = 0;
};

/// Largest value of ||v||_H1^2 / ||eps(v)||^2 over non-Killing divergence-free
/// fields of the truncated space: toroidal degrees 2..L on the sphere, stream
/// functions of Fourier degree <= L plus the harmonic fields on the torus.
KornResult korn_constant(const GridPtr& grid, int L);

/// Number of divergence-free fields with vanishing strain, counted from the
/// strain Gram matrix (relative to its largest eigenvalue): toroidal degrees
/// 1..K on the sphere, the torus field family of Fourier degree <= K.
int strain_kernel_dimension(const GridPtr& grid, int K, double rel_tol = 1e-10);

}  // namespace surfns
