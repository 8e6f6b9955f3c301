#pragma once

// Gauss-Legendre quadrature and fully normalized associated Legendre tables.
// Header-only and templated on the scalar type.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace surfns {

template <typename Scalar>
struct GaussLegendre {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;    // ascending in (-1, 1)
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
template <typename Scalar = double>
GaussLegendre<Scalar> gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendre<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  // Returns (P_n(x), P_n'(x)).
  auto legendre_pair = [n](Scalar x) {
    Scalar p0 = 1, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Scalar p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair<Scalar, Scalar>{p1, n * (x * p1 - p0) / (x * x - 1)};
  };
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, dp] = legendre_pair(x);
      const Scalar dx = pn / dp;
      x -= dx;
      if (std::abs(dx) <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
    }
    const Scalar dp = legendre_pair(x).second;
    const Scalar w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0;
  return rule;
}

/// Fully normalized associated Legendre functions (no Condon-Shortley phase)
/// evaluated on a set of colatitudes, for a fixed order m and degrees m..lmax.
///
/// value(j, l - m)   = Pbar_lm(cos theta_j)
/// dtheta(j, l - m)  = d/dtheta Pbar_lm(cos theta_j)
/// msin(j, l - m)    = m Pbar_lm(cos theta_j) / sin theta_j
///
/// Normalization: 2 pi * integral of Pbar_lm^2 over [-1, 1] equals 1, so that
/// Pbar_lm(cos theta) e^{i m phi} is orthonormal on the unit sphere.
template <typename Scalar = double>
struct LegendreColumn {
  int m = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> value, dtheta, msin;
};

template <typename Scalar = double>
std::vector<LegendreColumn<Scalar>> legendre_tables(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& colatitudes, int lmax) {
  const int nj = static_cast<int>(colatitudes.size());
  const Scalar pi = std::numbers::pi_v<Scalar>;
  std::vector<LegendreColumn<Scalar>> tables(lmax + 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x = colatitudes.array().cos();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s = colatitudes.array().sin();

  // Sectoral seeds Pbar_mm by the stable upward product in sin(theta).
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pmm =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Constant(nj, 1 / std::sqrt(4 * pi));
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) pmm = pmm.cwiseProduct(s) * std::sqrt(Scalar(2 * m + 1) / Scalar(2 * m));
    auto& col = tables[m];
    col.m = m;
    const int nl = lmax - m + 1;
    col.value.resize(nj, nl);
    col.dtheta.resize(nj, nl);
    col.msin.resize(nj, nl);
    col.value.col(0) = pmm;
    if (nl > 1) col.value.col(1) = std::sqrt(Scalar(2 * m + 3)) * x.cwiseProduct(pmm);
    for (int l = m + 2; l <= lmax; ++l) {
      const Scalar a = std::sqrt(Scalar(4 * l * l - 1) / Scalar(l * l - m * m));
      const Scalar b = std::sqrt(Scalar((l - 1) * (l - 1) - m * m) /
                                 Scalar(4 * (l - 1) * (l - 1) - 1));
      col.value.col(l - m) =
          a * (x.cwiseProduct(col.value.col(l - m - 1)) - b * col.value.col(l - m - 2));
    }
    // sin(theta) dP_l^m/dtheta = l cos(theta) P_l^m - sqrt((2l+1)/(2l-1) (l^2-m^2)) P_{l-1}^m
    for (int l = m; l <= lmax; ++l) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> num = Scalar(l) * x.cwiseProduct(col.value.col(l - m));
      if (l > m) {
        const Scalar c = std::sqrt(Scalar(2 * l + 1) / Scalar(2 * l - 1) * Scalar(l * l - m * m));
        num -= c * col.value.col(l - m - 1);
      }
      col.dtheta.col(l - m) = num.cwiseQuotient(s);
      col.msin.col(l - m) = Scalar(m) * col.value.col(l - m).cwiseQuotient(s);
    }
  }
  return tables;
}

}  // namespace surfns
