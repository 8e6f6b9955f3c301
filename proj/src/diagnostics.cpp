#include "surfns/diagnostics.hpp"

#include "surfns/errors.hpp"

#include <algorithm>
#include <cmath>

namespace surfns {

namespace {

struct LineFit {
  double intercept = 0.0, slope = 0.0, rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

DiagnosticsRecord record(const Dynamics& dyn, const SimState& state) {
  const StokesForm& form = dyn.form();
  const Eigen::VectorXd& c = state.c.coeffs;
  DiagnosticsRecord r;
  r.t = state.time();
  r.norm_u = c.norm();
  r.alpha = killing_coefficients(dyn.basis(), state.c);
  r.norm_uK = r.alpha.norm();
  // the Killing space is exactly the l = 1 block
  r.norm_uNK = c.tail(c.size() - 3).norm();
  r.energy = 0.5 * c.squaredNorm();
  r.dissipation = c.dot(form.A * c);
  r.work = dyn.forcing(c).dot(c);
  r.energy_residual = state.ledger_residual();
  r.lambda_defined = r.norm_u >= kLambdaFloor;
  r.lambda = r.lambda_defined ? r.dissipation / (r.norm_u * r.norm_u) : 0.0;
  return r;
}

std::vector<DiagnosticsRecord> record_all(const Dynamics& dyn, const std::vector<SimState>& samples) {
  std::vector<DiagnosticsRecord> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(record(dyn, s));
  return out;
}

DecayFit fit_decay_rate(const std::vector<double>& ts, const std::vector<double>& ys, FitWindow window) {
  if (ts.size() != ys.size()) throw ParameterError("fit_decay_rate: size mismatch");
  if (ts.size() < 10) throw ParameterError("fit_decay_rate: need at least 10 samples");
  for (double y : ys)
    if (!(y > 0.0)) throw ParameterError("fit_decay_rate: values must be positive");
  DecayFit f;
  const size_t n = ys.size();
  const size_t tail = std::max<size_t>(1, n / 10);
  double omega = 0;
  for (size_t i = n - tail; i < n; ++i) omega += ys[i];
  omega /= static_cast<double>(tail);
  f.omega = omega < 1e-12 ? 0.0 : omega;
  for (size_t i = n - tail + 1; i < n; ++i)
    if (ys[i] > ys[i - 1] * (1 + 1e-8)) {
      f.tail_monotone = false;
      f.warning = "tail is not monotone; plateau estimate is unreliable";
      break;
    }
  std::vector<double> x, y;
  for (size_t i = 0; i < n; ++i) {
    if (ts[i] < window.t_min || ts[i] > window.t_max) continue;
    const double d = ys[i] - f.omega;
    if (d <= 0) continue;
    x.push_back(ts[i]);
    y.push_back(std::log(d));
  }
  f.used = static_cast<int>(x.size());
  if (f.used < 2) {
    if (f.warning.empty()) f.warning = "fewer than two usable samples in the fit window";
    return f;
  }
  const LineFit lf = fit_line(x, y);
  f.zeta = -lf.slope;
  f.residual = lf.rms;
  return f;
}

KillingIdentityReport check_killing_identity(const std::vector<DiagnosticsRecord>& series, const ForcingSpec& spec,
                                             const KillingBasis& basis) {
  if (series.empty()) throw ParameterError("check_killing_identity: empty series");
  KillingIdentityReport r;
  switch (spec.tag) {
    case ForcingTag::Zero:
      r.beta = Eigen::VectorXd::Zero(basis.dim());
      break;
    case ForcingTag::ConstantField:
    case ForcingTag::ConstantKilling:
      r.beta = killing_coefficients(basis, SpectralState(spec.L, spec.field));
      break;
    default:
      throw ParameterError(std::string("check_killing_identity: forcing '") + forcing_tag_name(spec.tag) +
                           "' has a u-dependent Killing part");
  }
  const DiagnosticsRecord& s0 = series.front();
  const double fk2 = r.beta.squaredNorm();
  const double fd0 = r.beta.dot(s0.alpha);
  r.uk2_checked = std::abs(std::sqrt(fk2) - 1.0) < 1e-12 && s0.norm_uK < 1e-14;
  std::vector<double> ts, fd;
  for (const auto& s : series) {
    const double t = s.t - s0.t;
    r.max_alpha_deviation = std::max(r.max_alpha_deviation, (s.alpha - s0.alpha - t * r.beta).cwiseAbs().maxCoeff());
    const double v = r.beta.dot(s.alpha);
    r.max_fd_deviation = std::max(r.max_fd_deviation, std::abs(v - fd0 - t * fk2));
    if (r.uk2_checked) r.max_uk2_deviation = std::max(r.max_uk2_deviation, std::abs(s.norm_uK * s.norm_uK - t * t));
    ts.push_back(t);
    fd.push_back(v);
  }
  if (series.size() >= 2) r.fd_slope = fit_line(ts, fd).slope;
  return r;
}

MonotonicityReport check_monotonicity(const std::vector<double>& values, Direction direction, double slack) {
  MonotonicityReport r;
  for (size_t i = 1; i < values.size(); ++i) {
    const double tol = slack * std::max(1.0, std::abs(values[i - 1]));
    const double step = values[i] - values[i - 1];
    const bool bad = direction == Direction::Nonincreasing ? step > tol : step < -tol;
    if (bad) {
      r.ok = false;
      r.first_violation = static_cast<int>(i);
      return r;
    }
  }
  return r;
}

MonotonicityReport check_monotonicity(const std::vector<DiagnosticsRecord>& series, Direction direction) {
  std::vector<double> v;
  for (const auto& s : series) v.push_back(s.norm_uK);
  MonotonicityReport r = check_monotonicity(v, direction);
  if (!r.ok) r.t_violation = series[r.first_violation].t;
  return r;
}

DependenceReport continuous_dependence_ratio(const StokesForm& form, const std::vector<SimState>& a,
                                             const std::vector<SimState>& b, double T) {
  if (a.empty() || a.size() != b.size()) throw ParameterError("continuous_dependence_ratio: sample counts differ");
  DependenceReport r;
  r.initial_gap_sq = (a[0].c.coeffs - b[0].c.coeffs).squaredNorm();
  if (r.initial_gap_sq == 0.0) throw ParameterError("continuous_dependence_ratio: identical initial data");
  double prev_t = 0, prev_d = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].time() - b[i].time()) > 1e-12 * std::max(1.0, std::abs(a[i].time())))
      throw ParameterError("continuous_dependence_ratio: sample times differ");
    if (a[i].time() > T + 1e-12) break;
    const Eigen::VectorXd d = a[i].c.coeffs - b[i].c.coeffs;
    r.sup_ratio = std::max(r.sup_ratio, d.squaredNorm() / r.initial_gap_sq);
    const double diss = d.dot(form.A * d);
    if (i > 0) r.dissipation_difference += 0.5 * (a[i].time() - prev_t) * (diss + prev_d);
    prev_t = a[i].time();
    prev_d = diss;
  }
  return r;
}

double ratio_spread(const std::vector<double>& ratios) {
  if (ratios.empty()) throw ParameterError("ratio_spread: empty");
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  if (!(*lo > 0)) throw ParameterError("ratio_spread: ratios must be positive");
  return *hi / *lo;
}

LambdaSeries lambda_series(const StokesForm& form, const std::vector<SimState>& a, const std::vector<SimState>& b) {
  if (a.empty() || a.size() != b.size()) throw ParameterError("lambda_series: sample counts differ");
  LambdaSeries s;
  for (size_t i = 0; i < a.size(); ++i) {
    const Eigen::VectorXd d = a[i].c.coeffs - b[i].c.coeffs;
    const double n2 = d.squaredNorm();
    if (std::sqrt(n2) < kLambdaFloor) {
      s.truncated_at = static_cast<int>(i);
      break;
    }
    s.t.push_back(a[i].time());
    s.lambda.push_back(d.dot(form.A * d) / n2);
    s.L.push_back(-0.5 * std::log(n2));
  }
  if (s.t.empty()) return s;
  s.max_lambda = *std::max_element(s.lambda.begin(), s.lambda.end());
  s.lambda_integral.assign(s.t.size(), 0.0);
  for (size_t i = 1; i < s.t.size(); ++i)
    s.lambda_integral[i] = s.lambda_integral[i - 1] + 0.5 * (s.t[i] - s.t[i - 1]) * (s.lambda[i] + s.lambda[i - 1]);
  const auto [lo, hi] = std::minmax_element(s.L.begin(), s.L.end());
  const double range = *hi - *lo;
  const bool flat = !(range > 1e-12 * std::max(1.0, std::abs(*hi)));

  const Eigen::Index n = static_cast<Eigen::Index>(s.t.size());
  Eigen::MatrixX2d X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = s.t[i] - s.t[0];
    X(i, 1) = s.lambda_integral[i];
    y(i) = s.L[i] - s.L[0];
  }
  if (n >= 3 && !flat) {
    const Eigen::Vector2d ab = X.colPivHouseholderQr().solve(y);
    s.fit_a = ab(0);
    s.fit_b = ab(1);
    s.fit_residual = std::sqrt((y - X * ab).squaredNorm() / n) / range;
  }
  const LineFit lf = fit_line(s.t, s.L);
  s.line_slope = lf.slope;
  s.line_residual = flat ? 0.0 : lf.rms / range;
  return s;
}

}  // namespace surfns
