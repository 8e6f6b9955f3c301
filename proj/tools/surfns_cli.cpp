// surfns command-line front end.
//
// exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error,
// 3 the integration diverged

#include "surfns/errors.hpp"
#include "surfns/harness.hpp"
#include "surfns/parallel.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

using namespace surfns;

namespace {

struct Globals {
  std::string out = "surfns_out";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  bool quiet = false;
};

void print_report(const ScenarioOutput& o, bool quiet) {
  const RunReport& r = o.report;
  if (!quiet) {
    std::printf("%s: %s\n", r.scenario.c_str(), r.claims.c_str());
    for (const auto& c : r.checks) {
      std::printf("  [%s] %-22s measured %.6e  threshold %.3e", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                  c.threshold);
      if (!c.detail.empty()) std::printf("  (%s)", c.detail.c_str());
      std::printf("\n");
    }
    if (r.members > 0)
      std::printf("  absorbing-ball entry time: %s\n",
                  o.entry_time < 0 ? "never" : std::to_string(o.entry_time).c_str());
    if (r.diverged) std::printf("  diverged: %s\n", r.message.c_str());
  }
  std::printf("%s %s (%.2f s)\n", r.passed() ? "PASS" : "FAIL", r.scenario.c_str(), r.seconds);
}

int finish(const ScenarioOutput& o, const Globals& g) {
  write_outputs(g.out, o);
  print_report(o, g.quiet);
  if (o.report.diverged) return 3;
  return o.report.passed() ? 0 : 1;
}

Scenario with_overrides(Scenario s, const Globals& g) {
  if (g.seed) s.seed = *g.seed;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangential surface Navier-Stokes on the sphere: spectral runs and checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "override the scenario seed");
  app.add_option("--threads", g.threads, "worker threads (default: SURFNS_THREADS or hardware)");
  app.add_flag("--quiet", g.quiet, "print only the final verdict");

  std::string path, name;
  int members = 0;
  auto* run = app.add_subcommand("run", "run a config file and evaluate its checks");
  run->add_option("config", path)->required();
  auto* scen = app.add_subcommand("scenario", "run a built-in scenario");
  scen->add_option("name", name)->required();
  auto* list = app.add_subcommand("scenarios", "list built-in scenarios");
  auto* spec = app.add_subcommand("spectrum", "Stokes eigenvalues for a config");
  spec->add_option("config", path)->required();
  auto* korn = app.add_subcommand("korn", "Korn constant per truncation");
  korn->add_option("config", path)->required();
  auto* dec = app.add_subcommand("decompose", "Killing decomposition of a checkpoint");
  dec->add_option("checkpoint", path)->required();
  auto* ens = app.add_subcommand("ensemble", "run a config as an ensemble");
  ens->add_option("config", path)->required();
  ens->add_option("--members", members, "ensemble size")->required()->check(CLI::Range(2, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(g.threads);
    if (*run) return finish(run_scenario(with_overrides(load_scenario_file(path), g)), g);
    if (*scen) return finish(run_scenario(with_overrides(builtin_scenario(name), g)), g);
    if (*ens) return finish(run_ensemble(with_overrides(load_scenario_file(path), g), members), g);
    if (*list) {
      for (const auto& n : list_scenarios()) {
        const Scenario s = builtin_scenario(n);
        std::printf("%-28s %s\n", n.c_str(), s.claims.c_str());
      }
      return 0;
    }
    if (*spec) {
      const SpectrumReport r = spectrum(load_scenario_file(path));
      for (size_t l = 0; l < r.lambda_constant.size(); ++l)
        std::printf("lambda_%zu = %.17g\n", l + 1, r.lambda_constant[l]);
      std::printf("# assembled spectrum (%ld eigenvalues, ascending)\n", static_cast<long>(r.eigenvalues.size()));
      for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) std::printf("%.17g\n", r.eigenvalues(i));
      return 0;
    }
    if (*korn) {
      for (const auto& k : korn_table(load_scenario_file(path)))
        std::printf("C_P(L=%d) = %.15g  (basis %d)\n", k.L, k.constant, k.basis_size);
      return 0;
    }
    if (*dec) {
      const Decomposition d = decompose(load_checkpoint(path));
      for (Eigen::Index j = 0; j < d.alpha.size(); ++j) std::printf("alpha_%ld = %.17g\n", static_cast<long>(j + 1), d.alpha(j));
      std::printf("norm_u = %.17g\nnorm_uK = %.17g\nnorm_uNK = %.17g\n", d.norm_u, d.norm_uK, d.norm_uNK);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const CheckpointError& e) {
    std::fprintf(stderr, "checkpoint error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "runtime error: %s\n", e.what());
    return 3;
  }
  return 2;
}
