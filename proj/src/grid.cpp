#include "surfns/grid.hpp"

#include "surfns/differential.hpp"
#include "surfns/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace surfns {

namespace {

constexpr double kPi = std::numbers::pi;

// Fourier differentiation matrix for an even number of periodic samples.
Eigen::MatrixXd periodic_diff_matrix(int n) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  const double h = 2.0 * kPi / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const int k = i - j;
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * k * h);
    }
  }
  return d;
}

}  // namespace

double SurfaceGrid::area() const { return weights.sum(); }

GridPtr build_sphere_grid(int degree, double radius) {
  if (degree < 2) throw ParameterError("build_sphere_grid: degree must be >= 2, got " + std::to_string(degree));
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw ParameterError("build_sphere_grid: radius must be positive");

  auto grid = std::make_shared<SurfaceGrid>();
  grid->kind = SurfaceKind::Sphere;
  grid->radius = radius;
  grid->degree = degree;
  grid->n_lat = degree + 1;
  grid->n_lon = 2 * degree + 2;

  const auto rule = gauss_legendre<double>(grid->n_lat);
  grid->lat_angles.resize(grid->n_lat);
  grid->ring_weights.resize(grid->n_lat);
  for (int j = 0; j < grid->n_lat; ++j) {
    // Descending cos(theta): the first ring is closest to the north pole.
    grid->lat_angles(j) = std::acos(rule.nodes(grid->n_lat - 1 - j));
    grid->ring_weights(j) = rule.weights(grid->n_lat - 1 - j);
  }
  grid->lon_angles.resize(grid->n_lon);
  for (int k = 0; k < grid->n_lon; ++k) grid->lon_angles(k) = 2.0 * kPi * k / grid->n_lon;

  const Eigen::Index n = Eigen::Index(grid->n_lat) * grid->n_lon;
  grid->points.resize(n, 3);
  grid->normals.resize(n, 3);
  grid->e1.resize(n, 3);
  grid->e2.resize(n, 3);
  grid->weights.resize(n);
  const double dphi = 2.0 * kPi / grid->n_lon;
  for (int j = 0; j < grid->n_lat; ++j) {
    const double th = grid->lat_angles(j);
    const double st = std::sin(th), ct = std::cos(th);
    for (int k = 0; k < grid->n_lon; ++k) {
      const double ph = grid->lon_angles(k);
      const double sp = std::sin(ph), cp = std::cos(ph);
      const Eigen::Index i = grid->index(j, k);
      grid->normals.row(i) << st * cp, st * sp, ct;
      grid->points.row(i) = radius * grid->normals.row(i);
      grid->e1.row(i) << ct * cp, ct * sp, -st;
      grid->e2.row(i) << -sp, cp, 0.0;
      grid->weights(i) = grid->ring_weights(j) * dphi * radius * radius;
    }
  }

  auto tables = std::make_shared<SphereTables>();
  tables->lmax = degree;
  tables->legendre = legendre_tables<double>(grid->lat_angles, degree);
  tables->cos_table.resize(degree + 1, grid->n_lon);
  tables->sin_table.resize(degree + 1, grid->n_lon);
  for (int m = 0; m <= degree; ++m) {
    for (int k = 0; k < grid->n_lon; ++k) {
      tables->cos_table(m, k) = std::cos(m * grid->lon_angles(k));
      tables->sin_table(m, k) = std::sin(m * grid->lon_angles(k));
    }
  }
  grid->sphere = std::move(tables);
  return grid;
}

GridPtr build_torus_grid(int n_pol, int n_tor, double major_radius, double minor_radius) {
  if (!(minor_radius > 0.0) || !(major_radius > 0.0))
    throw GeometryError("build_torus_grid: radii must be positive");
  if (minor_radius >= major_radius)
    throw GeometryError("build_torus_grid: tube radius r must be smaller than R");
  if (n_pol < 8 || n_tor < 8 || n_pol % 2 || n_tor % 2)
    throw ParameterError("build_torus_grid: n_pol and n_tor must be even and >= 8");

  auto grid = std::make_shared<SurfaceGrid>();
  grid->kind = SurfaceKind::Torus;
  grid->radius = major_radius;
  grid->minor_radius = minor_radius;
  grid->n_lat = n_pol;
  grid->n_lon = n_tor;
  grid->degree = std::min(n_pol, n_tor) / 2 - 1;
  grid->lat_angles.resize(n_pol);
  grid->lon_angles.resize(n_tor);
  for (int j = 0; j < n_pol; ++j) grid->lat_angles(j) = 2.0 * kPi * j / n_pol;
  for (int k = 0; k < n_tor; ++k) grid->lon_angles(k) = 2.0 * kPi * k / n_tor;

  const Eigen::Index n = Eigen::Index(n_pol) * n_tor;
  grid->points.resize(n, 3);
  grid->normals.resize(n, 3);
  grid->e1.resize(n, 3);
  grid->e2.resize(n, 3);
  grid->weights.resize(n);
  const double cell = (2.0 * kPi / n_pol) * (2.0 * kPi / n_tor);
  const double R = major_radius, r = minor_radius;
  for (int j = 0; j < n_pol; ++j) {
    const double ph = grid->lat_angles(j);
    const double sf = std::sin(ph), cf = std::cos(ph);
    const double rho = R + r * cf;
    for (int k = 0; k < n_tor; ++k) {
      const double th = grid->lon_angles(k);
      const double st = std::sin(th), ct = std::cos(th);
      const Eigen::Index i = grid->index(j, k);
      grid->points.row(i) << rho * ct, rho * st, r * sf;
      grid->normals.row(i) << cf * ct, cf * st, sf;
      grid->e1.row(i) << -sf * ct, -sf * st, cf;
      grid->e2.row(i) << -st, ct, 0.0;
      grid->weights(i) = r * rho * cell;
    }
  }
  auto tables = std::make_shared<TorusTables>();
  tables->d_pol = periodic_diff_matrix(n_pol);
  tables->d_tor = periodic_diff_matrix(n_tor);
  grid->torus = std::move(tables);
  return grid;
}

GridPtr with_rotated_frame(const GridPtr& grid, const Eigen::VectorXd& angles) {
  if (angles.size() != grid->size()) throw GridMismatchError("with_rotated_frame: one angle per node required");
  auto out = std::make_shared<SurfaceGrid>(*grid);
  Eigen::VectorXd total = angles;
  if (grid->frame_rotation.size() == grid->size()) total += grid->frame_rotation;
  // Rebuild from the canonical frame so repeated rotations compose exactly.
  const Eigen::VectorXd prev = grid->frame_rotation.size() ? grid->frame_rotation : Eigen::VectorXd::Zero(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double cp = std::cos(prev(i)), sp = std::sin(prev(i));
    const Eigen::RowVector3d c1 = cp * grid->e1.row(i) - sp * grid->e2.row(i);
    const Eigen::RowVector3d c2 = sp * grid->e1.row(i) + cp * grid->e2.row(i);
    const double ca = std::cos(total(i)), sa = std::sin(total(i));
    out->e1.row(i) = ca * c1 + sa * c2;
    out->e2.row(i) = -sa * c1 + ca * c2;
  }
  out->frame_rotation = total;
  return out;
}

Eigen::MatrixX2d canonical_to_frame(const SurfaceGrid& grid, Eigen::MatrixX2d comps) {
  if (grid.frame_rotation.size() == 0) return comps;
  const Eigen::ArrayXd c = grid.frame_rotation.array().cos();
  const Eigen::ArrayXd s = grid.frame_rotation.array().sin();
  Eigen::MatrixX2d out(comps.rows(), 2);
  out.col(0) = (c * comps.col(0).array() + s * comps.col(1).array()).matrix();
  out.col(1) = (-s * comps.col(0).array() + c * comps.col(1).array()).matrix();
  return out;
}

Eigen::MatrixX2d frame_to_canonical(const SurfaceGrid& grid, Eigen::MatrixX2d comps) {
  if (grid.frame_rotation.size() == 0) return comps;
  const Eigen::ArrayXd c = grid.frame_rotation.array().cos();
  const Eigen::ArrayXd s = grid.frame_rotation.array().sin();
  Eigen::MatrixX2d out(comps.rows(), 2);
  out.col(0) = (c * comps.col(0).array() - s * comps.col(1).array()).matrix();
  out.col(1) = (s * comps.col(0).array() + c * comps.col(1).array()).matrix();
  return out;
}

TangentialField::TangentialField(GridPtr g) : grid(std::move(g)) {
  comps = Eigen::MatrixX2d::Zero(grid->size(), 2);
}

TangentialField::TangentialField(GridPtr g, Eigen::MatrixX2d c) : grid(std::move(g)), comps(std::move(c)) {
  if (comps.rows() != grid->size()) throw GridMismatchError("TangentialField: component count does not match grid");
}

AmbientField TangentialField::ambient() const {
  return grid->e1.array().colwise() * comps.col(0).array() + grid->e2.array().colwise() * comps.col(1).array();
}

bool TangentialField::all_finite() const { return comps.allFinite(); }

TangentialField& TangentialField::operator+=(const TangentialField& o) {
  require_same_grid(grid, o.grid, "TangentialField +=");
  comps += o.comps;
  return *this;
}

TangentialField& TangentialField::operator-=(const TangentialField& o) {
  require_same_grid(grid, o.grid, "TangentialField -=");
  comps -= o.comps;
  return *this;
}

TangentialField& TangentialField::operator*=(double a) {
  comps *= a;
  return *this;
}

TangentialField operator+(TangentialField a, const TangentialField& b) { return a += b; }
TangentialField operator-(TangentialField a, const TangentialField& b) { return a -= b; }
TangentialField operator*(double s, TangentialField a) { return a *= s; }

ViscosityField make_viscosity(GridPtr grid, const std::function<double(const Eigen::Vector3d&)>& nu,
                              int poly_degree) {
  ViscosityField field;
  field.grid = grid;
  field.poly_degree = poly_degree;
  field.values.resize(grid->size());
  for (Eigen::Index i = 0; i < grid->size(); ++i) {
    const double v = nu(grid->points.row(i).transpose());
    if (!std::isfinite(v) || v <= 0.0)
      throw ParameterError("viscosity must be strictly positive at every node (nu_* <= 0)");
    field.values(i) = v;
  }
  field.lower_bound = field.values.minCoeff();
  if (poly_degree == 0) {
    field.gradient_bound = 0.0;
  } else {
    const TangentialField g = surface_gradient(grid, field.values);
    field.gradient_bound = g.comps.rowwise().norm().maxCoeff();
  }
  return field;
}

ViscosityField constant_viscosity(GridPtr grid, double value) {
  if (!(value > 0.0)) throw ParameterError("constant viscosity must be positive (nu_* <= 0)");
  return make_viscosity(std::move(grid), [value](const Eigen::Vector3d&) { return value; }, 0);
}

TangentialField tangential_project(const GridPtr& grid, const AmbientField& v) {
  if (v.rows() != grid->size()) throw GridMismatchError("tangential_project: field size does not match grid");
  Eigen::MatrixX2d c(grid->size(), 2);
  c.col(0) = (v.array() * grid->e1.array()).rowwise().sum();
  c.col(1) = (v.array() * grid->e2.array()).rowwise().sum();
  return {grid, std::move(c)};
}

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (a.get() != b.get()) throw GridMismatchError(std::string(what) + ": fields live on different grids");
}

double l2_inner(const TangentialField& u, const TangentialField& v) {
  require_same_grid(u.grid, v.grid, "l2_inner");
  return u.grid->weights.dot((u.comps.array() * v.comps.array()).rowwise().sum().matrix());
}

double l2_norm(const TangentialField& u) { return std::sqrt(l2_inner(u, u)); }

double integrate(const SurfaceGrid& grid, const ScalarField& f) { return grid.weights.dot(f); }

}  // namespace surfns
