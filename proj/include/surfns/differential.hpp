#pragma once

// Pointwise tangential differential operators. All derivatives are spectral:
// harmonic synthesis derivatives on the sphere, Fourier differentiation with
// the exact metric on the torus.

#include "surfns/grid.hpp"

namespace surfns {

TangentialField surface_gradient(const GridPtr& grid, const ScalarField& p);

/// Frame components of P (grad U) P for the ambient interpolant U of u.
TangentialTensor covariant_derivative(const TangentialField& u);
ScalarField surface_divergence(const TangentialField& u);
TangentialTensor rate_of_strain(const TangentialField& u);

/// Squared Frobenius norm integrated over the surface.
double tensor_l2_sq(const TangentialTensor& t);
double h1_norm(const TangentialField& u);

}  // namespace surfns
