#include "surfns/forcing.hpp"

#include "surfns/errors.hpp"
#include "surfns/operators.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace surfns {

namespace {

struct TagName {
  ForcingTag tag;
  const char* name;
};

constexpr TagName kTagNames[] = {
    {ForcingTag::Zero, "zero"},       {ForcingTag::ConstantField, "f1"},
    {ForcingTag::F2, "f2"},           {ForcingTag::F3, "f3"},
    {ForcingTag::F4, "f4"},           {ForcingTag::F5, "f5"},
    {ForcingTag::ConstantKilling, "constant_killing"},
};

double sphere_radius_bound(const SurfaceGrid& g) { return g.points.rowwise().norm().maxCoeff(); }

}  // namespace

const char* forcing_tag_name(ForcingTag tag) {
  for (const auto& t : kTagNames)
    if (t.tag == tag) return t.name;
  return "unknown";
}

ForcingTag parse_forcing_tag(const std::string& name) {
  for (const auto& t : kTagNames)
    if (name == t.name) return t.tag;
  throw ParameterError("unknown forcing tag '" + name + "'");
}

ForcingSpec make_catalog_forcing(ForcingTag tag, const ForcingParams& params, const KillingBasis& basis) {
  const GridPtr& grid = basis.grid;
  if (grid->kind != SurfaceKind::Sphere) throw GeometryError("forcing catalog: time evolution is sphere-only");
  if (params.L < 1) throw ParameterError("forcing: L must be >= 1");
  if (params.sign != 1 && params.sign != -1) throw ParameterError("forcing: sign must be +1 or -1");
  ForcingSpec f;
  f.tag = tag;
  f.L = params.L;
  f.sign = params.sign;
  f.field = Eigen::VectorXd::Zero(toroidal_count(params.L));
  HypothesisFlags& h = f.flags;
  const bool plus = params.sign > 0;

  auto take_field = [&](const char* what) {
    if (!params.field) throw ParameterError(std::string("forcing: ") + what + " requires a field");
    if (params.field->L != params.L) throw ParameterError(std::string("forcing: ") + what + " field truncation mismatch");
    f.field = params.field->coeffs;
  };

  switch (tag) {
    case ForcingTag::Zero:
      f.independent_of_u = true;
      h = {0, 0, 0, 0, 0, true, true, true, true, true};
      break;
    case ForcingTag::ConstantField: {
      take_field("f1");
      f.independent_of_u = true;
      const double gk = f.field.head<3>().norm(), gnk = f.field.tail(f.field.size() - 3).norm();
      h.C1 = f.field.norm();
      h.C2 = 0;
      h.C3 = 0.5 * gk;
      h.C5 = 0;
      h.C6 = gnk;
      h.nega = h.pos = gk == 0.0;
      h.extra = h.extra2 = true;
      break;
    }
    case ForcingTag::F2: {
      take_field("f2");
      if (f.field.head<3>().norm() > 1e-10 * std::max(1.0, f.field.norm()))
        throw ParameterError("forcing: f2 field v must be orthogonal to the Killing fields");
      f.field.head<3>().setZero();
      h.C1 = f.field.norm();
      h.C2 = 1;
      h.C3 = plus ? 1 : 0;
      h.C5 = 0;
      h.C6 = h.C1;
      h.nega = !plus;
      h.pos = plus;
      h.extra = h.extra2 = true;
      break;
    }
    case ForcingTag::F3:
      h.C1 = 0;
      h.C2 = 1;
      h.C3 = plus ? 1 : 0;
      h.C5 = plus ? 1 : 0;
      h.C6 = 0;
      h.nega = !plus;
      h.pos = plus;
      h.extra = h.extra2 = true;
      break;
    case ForcingTag::F4: {
      const double R = grid->radius;
      if (std::abs(params.point.norm() - R) > 1e-10 * R)
        throw ParameterError("forcing: f4 point p must lie on the surface");
      f.point = params.point;
      Eigen::VectorXd dist(grid->size());
      for (Eigen::Index i = 0; i < grid->size(); ++i) dist(i) = (Eigen::Vector3d(grid->points.row(i)) - f.point).norm();
      std::vector<TangentialField> phi;
      for (int k = 0; k < 3; ++k) phi.push_back(toroidal_basis_field(grid, 1, toroidal_mode(k).m));
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const Eigen::VectorXd dot = (phi[j].comps.array() * phi[k].comps.array()).rowwise().sum();
          f.weight(j, k) = grid->weights.dot(dist.cwiseProduct(dot));
        }
      f.weight = 0.5 * (f.weight + f.weight.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(f.weight);
      const double wmax = es.eigenvalues().maxCoeff();
      h.C1 = 0;
      h.C2 = std::max(1.0, wmax);
      h.C3 = plus ? wmax : 0;
      h.C5 = 1;
      h.C6 = 0;
      h.nega = !plus;
      h.pos = plus;
      h.extra = h.extra2 = true;
      break;
    }
    case ForcingTag::F5: {
      const double rmax = sphere_radius_bound(*grid);
      h.C1 = 0;
      // f5 = (R - 1) u_NK - u_K on a sphere of radius R
      h.C2 = std::max(std::abs(rmax - 1.0), 1.0);
      h.C3 = 0;
      h.C5 = std::max(rmax - 1.0, 0.0);
      h.C6 = 0;
      h.nega = true;
      h.pos = false;
      h.extra = h.extra2 = true;
      break;
    }
    case ForcingTag::ConstantKilling: {
      if (params.axis < 1 || params.axis > basis.dim())
        throw ParameterError("forcing: constant Killing axis must be in 1.." + std::to_string(basis.dim()));
      f.c = params.c;
      f.axis = params.axis;
      f.field.head<3>() = params.c * basis.to_spectral.row(params.axis - 1).transpose();
      f.independent_of_u = true;
      h.C1 = std::abs(params.c);
      h.C2 = 0;
      h.C3 = 0.5 * std::abs(params.c);
      h.nega = h.pos = params.c == 0.0;
      h.extra = h.extra2 = true;
      break;
    }
  }
  return f;
}

HypothesisReport hypothesis_check(const ForcingSpec& spec, const GridPtr& grid, const KillingBasis& basis,
                                  int n_samples, std::uint64_t seed) {
  if (n_samples < 10) throw ParameterError("hypothesis_check: n_samples must be >= 10");
  const int L = spec.L;
  const int n = toroidal_count(L);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> logscale(-1.0, 1.0);
  auto sample = [&] {
    SpectralState s(L);
    for (int i = 0; i < n; ++i) s.coeffs(i) = n01(rng);
    s.coeffs *= std::pow(10.0, logscale(rng)) / s.coeffs.norm();
    return s;
  };
  auto apply = [&](const SpectralState& s) { return forcing_apply(spec, grid, basis, s).coeffs; };

  HypothesisReport r;
  r.samples = n_samples;
  const Eigen::VectorXd f0 = apply(SpectralState(L));
  r.C1_hat = f0.norm();
  r.C6_hat = f0.tail(n - 3).norm();
  r.max_killing_work = -1e300;
  r.min_killing_work = 1e300;
  const HypothesisFlags& h = spec.flags;
  const double slack = 1e-9;
  char buf[256];
  for (int k = 0; k < n_samples; ++k) {
    const SpectralState u1 = sample(), u2 = sample();
    const Eigen::VectorXd f1 = apply(u1), f2 = apply(u2);
    r.C2_hat = std::max(r.C2_hat, (f1 - f2).norm() / (u1.coeffs - u2.coeffs).norm());

    const double wk = f1.head<3>().dot(u1.coeffs.head<3>());
    const double wnk = f1.tail(n - 3).dot(u1.coeffs.tail(n - 3));
    const double nk = u1.coeffs.tail(n - 3).norm(), kk = u1.coeffs.head<3>().norm();
    r.max_killing_work = std::max(r.max_killing_work, wk);
    r.min_killing_work = std::min(r.min_killing_work, wk);
    if (nk > 0) r.C5_hat = std::max(r.C5_hat, (wnk - r.C6_hat * nk) / (nk * nk));

    const double scale = slack * (1.0 + u1.coeffs.squaredNorm());
    if (h.nega && wk > scale) {
      std::snprintf(buf, sizeof buf, "sample %d: (f_K, u) = %.3e > 0 violates the nonpositive Killing work", k, wk);
      r.violations.emplace_back(buf);
    }
    if (h.pos && wk < -scale) {
      std::snprintf(buf, sizeof buf, "sample %d: (f_K, u) = %.3e < 0 violates the nonnegative Killing work", k, wk);
      r.violations.emplace_back(buf);
    }
    if (h.uk1 && wk > h.C3 * kk * kk + h.C3 + scale) {
      std::snprintf(buf, sizeof buf, "sample %d: Killing work %.3e exceeds C3 bound", k, wk);
      r.violations.emplace_back(buf);
    }
    if (h.extra && wnk > h.C5 * nk * nk + h.C6 * nk + scale) {
      std::snprintf(buf, sizeof buf, "sample %d: non-Killing work %.3e exceeds C5/C6 bound", k, wnk);
      r.violations.emplace_back(buf);
    }
    if (h.extra2 && wnk > h.C5 * nk * nk + h.C6 * nk + h.C6 * kk * kk + scale) {
      std::snprintf(buf, sizeof buf, "sample %d: non-Killing work %.3e exceeds the extended C5/C6 bound", k, wnk);
      r.violations.emplace_back(buf);
    }
  }
  if (r.C1_hat > h.C1 * (1 + slack) + slack) {
    std::snprintf(buf, sizeof buf, "|f(0)| = %.6e exceeds declared C1 = %.6e", r.C1_hat, h.C1);
    r.violations.emplace_back(buf);
  }
  if (r.C2_hat > h.C2 * (1 + slack) + slack) {
    std::snprintf(buf, sizeof buf, "Lipschitz ratio %.6e exceeds declared C2 = %.6e", r.C2_hat, h.C2);
    r.violations.emplace_back(buf);
  }
  return r;
}

}  // namespace surfns
