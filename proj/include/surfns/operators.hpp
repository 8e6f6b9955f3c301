#pragma once

// Right-hand-side operators in toroidal coefficient space:
//   dc/dt = -A c - N(c) + F(c)

#include "surfns/forcing.hpp"
#include "surfns/grid.hpp"
#include "surfns/harmonics.hpp"
#include "surfns/killing.hpp"

namespace surfns {

/// A_ij = int 2 nu eps(Phi_i) : eps(Phi_j), split as A = nu_bar D + A'.
struct StokesForm {
  GridPtr grid;
  ViscosityField nu;
  int L = 0;
  Eigen::MatrixXd A;
  Eigen::MatrixXd A_prime;  // assembled with nu - nu_bar, positive semidefinite
  Eigen::VectorXd D;        // constant-viscosity diagonal, lambda_l per slot
  Eigen::VectorXd lambda;   // lambda_l for l = 0..L (entry 0 unused)
  double nu_bar = 0.0;
  double a_radius = 0.0;        // largest eigenvalue of A
  double a_prime_radius = 0.0;  // spectral radius of A'
};

/// Requires a sphere grid of degree >= L + ceil((1 + deg nu) / 2).
StokesForm assemble_stokes(const GridPtr& grid, const ViscosityField& nu, int L);

SpectralState stokes_apply(const StokesForm& form, const SpectralState& s);

/// Coefficients of P0[(u . grad) u], evaluated pseudospectrally on `grid`.
SpectralState convective_term(const GridPtr& grid, const SpectralState& s);

/// Coefficients of P0 f(., u).
SpectralState forcing_apply(const ForcingSpec& spec, const GridPtr& grid, const KillingBasis& basis,
                            const SpectralState& s);

}  // namespace surfns
