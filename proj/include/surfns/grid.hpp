#pragma once

// Closed surfaces (sphere, torus), their quadrature grids and nodal field
// containers. Node index is ring-major: idx = j * n_lon + k, where j runs over
// colatitude (sphere) or poloidal angle (torus) and k over longitude /
// toroidal angle.

#include "surfns/legendre.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace surfns {

enum class SurfaceKind : std::uint8_t { Sphere = 0, Torus = 1 };

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using AmbientField = Eigen::Matrix<double, Eigen::Dynamic, 3>;
using ScalarField = Eigen::VectorXd;

/// Precomputed transform tables for the sphere grid (immutable, shared).
struct SphereTables {
  int lmax = 0;                                // largest resolved degree
  std::vector<LegendreColumn<double>> legendre;  // one column block per order m
  Eigen::MatrixXd cos_table;                   // (lmax+1) x n_lon, cos(m phi_k)
  Eigen::MatrixXd sin_table;                   // (lmax+1) x n_lon, sin(m phi_k)
};

/// Periodic spectral differentiation matrices for the torus grid.
struct TorusTables {
  Eigen::MatrixXd d_pol;  // n_pol x n_pol, d/dphi
  Eigen::MatrixXd d_tor;  // n_tor x n_tor, d/dtheta
};

struct SurfaceGrid {
  SurfaceKind kind = SurfaceKind::Sphere;
  double radius = 1.0;        // sphere radius, or torus major radius R
  double minor_radius = 0.0;  // torus tube radius r (zero for the sphere)
  int n_lat = 0;              // colatitude (sphere) / poloidal (torus) count
  int n_lon = 0;              // longitude (sphere) / toroidal (torus) count
  int degree = 0;             // sphere: exactly resolved harmonic degree

  Eigen::VectorXd lat_angles;    // theta_j (sphere colatitude) or phi_j (torus)
  Eigen::VectorXd lon_angles;    // phi_k (sphere longitude) or theta_k (torus)
  Eigen::VectorXd ring_weights;  // sphere: Gauss-Legendre weights in cos(theta)

  AmbientField points;
  AmbientField normals;
  AmbientField e1;  // sphere: e_theta; torus: poloidal unit vector
  AmbientField e2;  // sphere: e_phi;   torus: toroidal unit vector
  Eigen::VectorXd weights;  // area quadrature weights

  // Per-node rotation of (e1, e2) relative to the canonical coordinate frame;
  // empty when the canonical frame is used.
  Eigen::VectorXd frame_rotation;

  std::shared_ptr<const SphereTables> sphere;
  std::shared_ptr<const TorusTables> torus;

  Eigen::Index size() const { return weights.size(); }
  Eigen::Index index(int j, int k) const { return Eigen::Index(j) * n_lon + k; }
  double area() const;
};

using GridPtr = std::shared_ptr<const SurfaceGrid>;

/// Gauss-Legendre grid resolving spherical harmonics up to `degree`:
/// degree+1 colatitudes and 2*degree+2 longitudes.
GridPtr build_sphere_grid(int degree, double radius);

/// Uniform (phi, theta) grid on the torus with area element r (R + r cos phi).
GridPtr build_torus_grid(int n_pol, int n_tor, double major_radius, double minor_radius);

/// Copy of `grid` whose tangent frame is rotated by `angles` (radians) at each
/// node. All operators accept such grids.
GridPtr with_rotated_frame(const GridPtr& grid, const Eigen::VectorXd& angles);

/// Converts frame components between the canonical coordinate frame and the
/// (possibly rotated) frame stored in the grid.
Eigen::MatrixX2d canonical_to_frame(const SurfaceGrid& grid, Eigen::MatrixX2d comps);
Eigen::MatrixX2d frame_to_canonical(const SurfaceGrid& grid, Eigen::MatrixX2d comps);

/// Tangential vector field stored by its two frame components per node.
struct TangentialField {
  GridPtr grid;
  Eigen::MatrixX2d comps;

  TangentialField() = default;
  explicit TangentialField(GridPtr g);
  TangentialField(GridPtr g, Eigen::MatrixX2d c);

  AmbientField ambient() const;
  bool all_finite() const;

  TangentialField& operator+=(const TangentialField& o);
  TangentialField& operator-=(const TangentialField& o);
  TangentialField& operator*=(double a);
};

TangentialField operator+(TangentialField a, const TangentialField& b);
TangentialField operator-(TangentialField a, const TangentialField& b);
TangentialField operator*(double s, TangentialField a);

/// 2x2 tangential tensor per node in the (e1, e2) frame. Column layout:
/// (T11, T12, T21, T22) with T_ab = e_a . (directional derivative along e_b).
struct TangentialTensor {
  GridPtr grid;
  Eigen::Matrix<double, Eigen::Dynamic, 4> comps;
  bool symmetric = false;

  double frobenius_sq(Eigen::Index node) const { return comps.row(node).squaredNorm(); }
};

/// Strictly positive nodal viscosity.
struct ViscosityField {
  GridPtr grid;
  Eigen::VectorXd values;
  double lower_bound = 0.0;     // nu_*, the minimum nodal value
  double gradient_bound = 0.0;  // max nodal |grad nu| (reported, not enforced)
  int poly_degree = 0;          // band-limit of nu as a polynomial in x

  double max_value() const { return values.maxCoeff(); }
  bool is_constant() const { return poly_degree == 0; }
};

ViscosityField make_viscosity(GridPtr grid, const std::function<double(const Eigen::Vector3d&)>& nu,
                              int poly_degree);
ViscosityField constant_viscosity(GridPtr grid, double value);

/// Frame components of (I - n n^T) v.
TangentialField tangential_project(const GridPtr& grid, const AmbientField& v);

/// Quadrature of u . v over the surface.
double l2_inner(const TangentialField& u, const TangentialField& v);
double l2_norm(const TangentialField& u);
double integrate(const SurfaceGrid& grid, const ScalarField& f);

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what);

}  // namespace surfns
