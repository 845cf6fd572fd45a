#pragma once

// Subcommands of the levylap tool. Each returns its verdict, JSON payload
// and CSV tables; execute() writes them and maps the status to an exit code.

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace levylap::cli {

enum ExitCode { kExitPass = 0, kExitCriterion = 1, kExitConfig = 2, kExitNumerical = 3 };

struct CommandOutput {
  /// pass | fail | hypothesis_not_met
  std::string status;
  json result;
  /// (file stem suffix, table); "" gives <command>.csv.
  std::vector<std::pair<std::string, CsvTable>> tables;
};

struct CurvatureOptions {
  int points = 100;
  double radius = 3.0;
};

struct BasisCheckOptions {
  std::vector<int> n{8, 16, 32, 64};
  /// t | t2 | step (indicator of [1/2, 1]) | step13 (indicator of [1/3, 1])
  std::string weight = "t";
};

struct CurveSelection {
  /// Curve id from the configured set, or "all".
  std::string curve = "all";
};

struct LevyOptions {
  std::string w = "left:t,t2";
  std::string curve = "all";
};

CommandOutput run_curvature(const ExperimentConfig& cfg, const CurvatureOptions& o);
CommandOutput run_transport(const ExperimentConfig& cfg, const CurveSelection& o);
CommandOutput run_basis_check(const ExperimentConfig& cfg, const BasisCheckOptions& o);
CommandOutput run_levy(const ExperimentConfig& cfg, const LevyOptions& o);
CommandOutput run_theorem(const ExperimentConfig& cfg);
CommandOutput run_lemmas(const ExperimentConfig& cfg);
CommandOutput run_calibrate(const ExperimentConfig& cfg);

/// Weight functions accepted by basis-check.
std::function<double(double)> basis_weight(const std::string& name);

int exit_code(const std::string& status);

/// Writes <out>/<command>.json and the CSV tables; returns the document.
json write_outputs(const std::string& command, const ExperimentConfig& cfg,
                   const CommandOutput& output, const std::string& out_dir,
                   const std::string& timestamp);

}  // namespace levylap::cli
