#pragma once

// Scenario execution: build the discretization from a config, integrate,
// evaluate the declared checks, and serialize CSV / JSON / checkpoints.

#include "surfns/checkpoint.hpp"
#include "surfns/config.hpp"

#include <array>
#include <string>
#include <vector>

namespace surfns {

const char* code_version();

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;  // pass iff measured <= threshold
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string scenario;
  std::string claims;
  std::vector<CheckResult> checks;
  bool diverged = false;
  std::string message;
  double seconds = 0.0;
  std::uint32_t config_hash = 0;
  std::uint64_t seed = 0;
  int members = 0;
  std::string code_version;

  bool passed() const;
};

struct Simulation {
  GridPtr grid;
  KillingBasis basis;
  StokesForm form;
  ForcingSpec spec;
};

/// Sphere only.
Simulation build_simulation(const Scenario& s);

/// Named modes plus sum alpha_j v_j, or a seeded random field with
/// coefficients ~ N(0, 1) / l^2 rescaled to the prescribed |u_K|, |u_NK|.
SpectralState initial_condition(const Scenario& s, const Simulation& sim, std::uint64_t seed);

/// Unit-norm random direction with the same spectral shape.
SpectralState random_direction(int L, std::uint64_t seed);

/// Deterministic per-stream seed derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

constexpr int kEnsembleQuantities = 8;  // norm_u ... lambda, in CSV order

struct EnsembleRow {
  double t = 0.0;
  int members = 0;
  std::array<double, kEnsembleQuantities> max{}, min{}, mean{};
};

struct ScenarioOutput {
  RunReport report;
  std::vector<DiagnosticsRecord> series;  // single run
  std::vector<std::vector<DiagnosticsRecord>> member_series;
  std::vector<EnsembleRow> ensemble;
  double entry_time = -1.0;  // ensemble absorbing-ball entry (-1: never)
  bool has_final = false;
  Checkpoint final_state;
};

/// Static checks only: no integration. Ensemble when members > 0.
ScenarioOutput run_scenario(const Scenario& s);
ScenarioOutput run_ensemble(const Scenario& s, int n_members);

std::string csv_text(const std::vector<DiagnosticsRecord>& series, int n_alpha);
std::string ensemble_csv_text(const std::vector<EnsembleRow>& rows);
std::string report_json(const RunReport& r, double entry_time = -1.0);

/// Writes <name>.csv (or <name>.ensemble.csv and member CSVs), <name>.report.json
/// and <name>.final.snsk into `dir`, creating it if needed.
void write_outputs(const std::string& dir, const ScenarioOutput& out);

// Built-in scenarios.
std::vector<std::string> list_scenarios();
std::string builtin_scenario_text(const std::string& name);
Scenario builtin_scenario(const std::string& name);

struct SpectrumReport {
  std::vector<double> lambda_constant;  // l = 1..L, unit viscosity
  Eigen::VectorXd eigenvalues;          // assembled A for the configured nu
};
SpectrumReport spectrum(const Scenario& s);

std::vector<KornResult> korn_table(const Scenario& s);

struct Decomposition {
  Eigen::VectorXd alpha;
  double norm_u = 0.0, norm_uK = 0.0, norm_uNK = 0.0;
};
Decomposition decompose(const Checkpoint& c);

}  // namespace surfns
