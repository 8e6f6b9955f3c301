#pragma once

// Observables along a trajectory: norms, energy ledger, decay fits, Killing
// identities, monotonicity, continuous dependence and the quotient Lambda.

#include "surfns/timestepper.hpp"

#include <limits>
#include <string>
#include <vector>

namespace surfns {

struct DiagnosticsRecord {
  double t = 0.0;
  double norm_u = 0.0;
  double norm_uK = 0.0;
  double norm_uNK = 0.0;
  double energy = 0.0;
  double dissipation = 0.0;  // int 2 nu |eps(u)|^2
  double work = 0.0;         // int f . u
  double energy_residual = 0.0;
  double lambda = 0.0;       // dissipation / |u|^2
  bool lambda_defined = false;
  Eigen::VectorXd alpha;
};

constexpr double kLambdaFloor = 1e-13;

DiagnosticsRecord record(const Dynamics& dyn, const SimState& state);
std::vector<DiagnosticsRecord> record_all(const Dynamics& dyn, const std::vector<SimState>& samples);

struct FitWindow {
  double t_min = -std::numeric_limits<double>::infinity();
  double t_max = std::numeric_limits<double>::infinity();
};

struct DecayFit {
  double zeta = 0.0;     // y ~ omega + C exp(-zeta t)
  double omega = 0.0;    // tail plateau
  double residual = 0.0; // RMS of the log-linear fit
  int used = 0;
  bool tail_monotone = true;
  std::string warning;
};

/// ys are values of |u_NK|^2 at times ts.
DecayFit fit_decay_rate(const std::vector<double>& ts, const std::vector<double>& ys, FitWindow window = {});

struct KillingIdentityReport {
  Eigen::VectorXd beta;             // (f, v_j)
  double max_alpha_deviation = 0.0; // alpha(t) vs alpha(0) + t beta
  double max_fd_deviation = 0.0;    // (f_K, u_K(t)) vs (f_K, u_K(0)) + t |f_K|^2
  double fd_slope = 0.0;            // least-squares slope of (f_K, u_K(t))
  bool uk2_checked = false;         // only for |f_K| = 1 and u_K(0) = 0
  double max_uk2_deviation = 0.0;   // |u_K(t)|^2 vs t^2
};

/// For forcings whose Killing part does not depend on u.
KillingIdentityReport check_killing_identity(const std::vector<DiagnosticsRecord>& series, const ForcingSpec& spec,
                                             const KillingBasis& basis);

enum class Direction { Nonincreasing, Nondecreasing };

struct MonotonicityReport {
  bool ok = true;
  int first_violation = -1;
  double t_violation = 0.0;
};

/// Applied to |u_K|, with slack 1e-10 max(1, value).
MonotonicityReport check_monotonicity(const std::vector<DiagnosticsRecord>& series, Direction direction);
MonotonicityReport check_monotonicity(const std::vector<double>& values, Direction direction, double slack = 1e-10);

struct DependenceReport {
  double initial_gap_sq = 0.0;
  double sup_ratio = 0.0;             // sup_[0,T] |u1 - u2|^2 / |u1(0) - u2(0)|^2
  double dissipation_difference = 0.0; // int_0^T int 2 nu |eps(u1 - u2)|^2 (trapezoid over samples)
};

/// Both trajectories must share the sample times.
DependenceReport continuous_dependence_ratio(const StokesForm& form, const std::vector<SimState>& a,
                                             const std::vector<SimState>& b, double T);

/// max / min of a set of ratios.
double ratio_spread(const std::vector<double>& ratios);

struct LambdaSeries {
  std::vector<double> t;
  std::vector<double> lambda;
  std::vector<double> L;        // -1/2 log |u|^2
  std::vector<double> lambda_integral;  // int_0^t Lambda (trapezoid)
  int truncated_at = -1;        // first sample with |u| below the floor
  double max_lambda = 0.0;
  // L(t) - L(0) ~ a t + b int_0^t Lambda, the form of dL/dt <= C + C Lambda
  double fit_a = 0.0;
  double fit_b = 0.0;
  double fit_residual = 0.0;    // RMS misfit over the range of L (0 if L is flat)
  // plain straight line in t, for reference
  double line_slope = 0.0;
  double line_residual = 0.0;
};

/// Lambda along the difference a - b of two trajectories.
LambdaSeries lambda_series(const StokesForm& form, const std::vector<SimState>& a, const std::vector<SimState>& b);

}  // namespace surfns
