// Command-line driver: runs verification suites, convergence sweeps over
// the truncation degree, and prints the check catalog.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qmanifold/errors.hpp"
#include "qmanifold/report.hpp"
#include "qmanifold/suites.hpp"
#include "qmanifold/sweep.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailures = 1;
constexpr int kExitUsage = 2;

std::string report_csv(const qmfd::VerificationReport& report) {
  std::string out = "id,status,residual,tolerance,wall_ms,anchor\n";
  char line[192];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof(line), "%s,%s,%.17g,%.17g,%.3f,", c.id.c_str(),
                  qmfd::to_string(c.status), c.residual, c.tolerance, c.wall_ms);
    out += line;
    out += '"' + c.anchor + "\"\n";
  }
  return out;
}

void print_summary(const qmfd::VerificationReport& report) {
  for (const auto& c : report.checks) {
    std::printf("%-7s %-58s residual=%-12.3e tol=%-10.3e\n", qmfd::to_string(c.status),
                c.id.c_str(), c.residual, c.tolerance);
    if (c.status == qmfd::CheckStatus::fail && !c.note.empty()) {
      std::printf("        `- %s\n", c.note.c_str());
    }
  }
  std::printf("summary: %d pass, %d fail, %d vacuous\n", report.pass_count(),
              report.fail_count(), report.vacuous_count());
}

void add_tolerance_flags(CLI::App* cmd, std::map<std::string, double>& overrides) {
  for (const auto& name : qmfd::Tolerances::names()) {
    cmd->add_option_function<double>(
        "--tol." + name, [&overrides, name](double v) { overrides[name] = v; },
        "override the '" + name + "' tolerance");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum-manifold verification toolkit"};
  app.require_subcommand(1);

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  std::string manifold;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  int degree = 0;
  std::uint64_t seed = 7;
  std::map<std::string, double> tol_overrides;
  verify->add_option("--suite", suite, "suite to run")->default_str("all");
  verify->add_option("--manifold", manifold, "manifold for the generic 'atlas' suite");
  verify->add_option("--degree", degree,
                     "truncation degree K (0: QM_DEFAULT_DEGREE or per-suite default)");
  verify->add_option("--seed", seed, "RNG seed recorded in the report");
  verify->add_option("--out", out_path, "write the report to this path");
  verify->add_option("--format", format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->add_option("--config", config_path, "load a SuiteConfig JSON document");
  add_tolerance_flags(verify, tol_overrides);

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "convergence sweep over the degree");
  std::string sweep_check = "tau-round-trip";
  std::vector<int> sweep_degrees{8, 16, 32, 48};
  std::string sweep_out;
  std::uint64_t sweep_seed = 7;
  sweep->add_option("--check", sweep_check, "check to sweep (see `describe`)");
  sweep->add_option("--degree", sweep_degrees, "degrees to measure")->expected(-1);
  sweep->add_option("--seed", sweep_seed, "RNG seed");
  sweep->add_option("--out", sweep_out, "write the CSV table to this path");

  // describe ----------------------------------------------------------------
  auto* describe = app.add_subcommand("describe", "print the suite/check catalog");
  std::string describe_suite;
  describe->add_option("--suite", describe_suite, "restrict the catalog to one suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      qmfd::SuiteConfig cfg;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw qmfd::ConfigError("cannot read config '" + config_path + "'");
        nlohmann::json j;
        in >> j;
        cfg = qmfd::SuiteConfig::from_json(j);
      }
      if (verify->count("--suite") > 0 || config_path.empty()) cfg.suite = suite;
      if (verify->count("--manifold") > 0) cfg.manifold = manifold;
      if (verify->count("--degree") > 0) cfg.degree = degree;
      if (verify->count("--seed") > 0 || config_path.empty()) cfg.seed = seed;
      if (verify->count("--out") > 0) cfg.out_path = out_path;
      for (const auto& [name, value] : tol_overrides) cfg.tol.set(name, value);

      const qmfd::VerificationReport report = qmfd::run_suite(cfg);
      if (format == "csv") {
        if (!cfg.out_path.empty()) {
          std::ofstream out(cfg.out_path);  // overwrite the JSON the suite wrote
          if (!out) throw qmfd::ConfigError("cannot write '" + cfg.out_path + "'");
          out << report_csv(report);
        } else {
          std::cout << report_csv(report);
        }
      } else if (verify->count("--format") > 0 && cfg.out_path.empty()) {
        std::cout << report.to_json(true).dump(2) << "\n";
      } else {
        print_summary(report);
      }
      return report.exit_code() == 0 ? kExitPass : kExitCheckFailures;
    }

    if (sweep->parsed()) {
      const qmfd::SweepTable table =
          qmfd::convergence_sweep(sweep_check, sweep_degrees, sweep_seed);
      if (!sweep_out.empty()) {
        std::ofstream out(sweep_out);
        if (!out) throw qmfd::ConfigError("cannot write '" + sweep_out + "'");
        out << table.to_csv();
      } else {
        std::cout << table.to_csv();
      }
      return kExitPass;
    }

    if (describe->parsed()) {
      std::printf("suites: ");
      for (const auto& s : qmfd::suite_names()) std::printf("%s ", s.c_str());
      std::printf("\nsweepable checks: ");
      for (const auto& s : qmfd::sweepable_checks()) std::printf("%s ", s.c_str());
      std::printf("\n\n%-16s %-34s %s\n", "suite", "check", "verifies");
      for (const auto& info : qmfd::check_catalog()) {
        if (!describe_suite.empty() && info.suite != describe_suite) continue;
        std::printf("%-16s %-34s %s\n", info.suite.c_str(), info.id.c_str(),
                    info.anchor.c_str());
      }
      return kExitPass;
    }
  } catch (const qmfd::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
