#pragma once

// Report serialization: JSON records for verdicts and CSV tables with fixed
// 17-significant-digit numbers.

#include <string>
#include <vector>

#include "config.hpp"
#include "levylap/harness.hpp"

namespace levylap::cli {

inline constexpr const char* kVersion = "1.0.0";

json matrix_json(const CMat& m);
json levy_report_json(const LevyReport& r);
json duality_json(const DualityEvidence& d);
json sectors_json(const SectorCorrespondence& s);
json theorem_json(const TheoremVerdict& v);
json lemma_json(const LemmaVerdict& v);
json calibration_json(const CalibrationResult& c);

/// Run manifest: config, its hash, module versions, pairing constant, seed
/// and output paths.
json manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& outputs);

/// Top-level report document. `timestamp` is the only field that differs
/// between identical runs.
json report_document(const std::string& command, const std::string& status,
                     const ExperimentConfig& cfg, const std::vector<std::string>& outputs,
                     json result, const std::string& timestamp);

/// The document without its timestamp, for run-to-run comparison.
json without_timestamp(json doc);

std::string utc_timestamp();

/// "%.17g".
std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  /// Cells are already formatted; use format_number for numbers.
  void add(std::vector<std::string> row);
  std::string str() const;
  void write(const std::string& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `doc.dump(2)` plus a trailing newline.
void write_json(const std::string& path, const json& doc);

}  // namespace levylap::cli
