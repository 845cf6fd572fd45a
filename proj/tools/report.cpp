#include "report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levylap/errors.hpp"

namespace levylap::cli {

json matrix_json(const CMat& m) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (int k = 0; k < m.cols(); ++k) {
      rr.push_back(m(i, k).real());
      ir.push_back(m(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}, {"norm", m.norm()}};
}

json levy_report_json(const LevyReport& r) {
  json j = {{"curve_id", r.curve_id},
            {"w_id", r.w_id},
            {"connection", r.connection},
            {"metric", r.metric},
            {"basis", r.basis},
            {"transport_steps", r.transport_steps},
            {"closed_form", matrix_json(r.closed_form)},
            {"first_term", matrix_json(r.first_term)},
            {"second_term", matrix_json(r.second_term)},
            {"unitarity_drift", r.unitarity_drift},
            {"first_quadrature_error", r.first_quadrature_error},
            {"second_quadrature_error", r.second_quadrature_error},
            {"quadrature_flagged", r.quadrature_flagged}};
  if (r.cesaro_estimate) {
    json partials = json::array();
    for (const auto& p : r.cesaro_partials) partials.push_back(p.norm());
    j["cesaro"] = {{"modes", r.modes},
                   {"fd_step", r.fd_step},
                   {"partial_norms", partials},
                   {"estimate", matrix_json(*r.cesaro_estimate)},
                   {"increment_estimate", matrix_json(*r.cesaro_increment_estimate)},
                   {"difference", (*r.cesaro_estimate - r.closed_form).norm()}};
  }
  return j;
}

json duality_json(const DualityEvidence& d) {
  return {{"label", d.label},
          {"max_sd_defect", d.max_sd_defect},
          {"max_asd_defect", d.max_asd_defect},
          {"max_curvature", d.max_curvature}};
}

json sectors_json(const SectorCorrespondence& s) {
  return {{"self_dual_factor", to_string(s.self_dual_factor)},
          {"anti_self_dual_factor", to_string(other(s.self_dual_factor))},
          {"max_defect", s.max_defect}};
}

namespace {

json factor_or_null(const std::optional<Isoclinic>& f) {
  return f ? json(to_string(*f)) : json(nullptr);
}

}  // namespace

json theorem_json(const TheoremVerdict& v) {
  json factors = json::array();
  for (const auto& f : v.factors) {
    json reports = json::array();
    for (const auto& r : f.reports) reports.push_back(levy_report_json(r));
    factors.push_back({{"factor", to_string(f.factor)},
                       {"w_id", f.w_id},
                       {"span", f.span},
                       {"norms", f.norms},
                       {"max_norm", f.max_norm},
                       {"reports", reports}});
  }
  return {{"status", v.status},
          {"outcome", v.outcome},
          {"expected_outcome", v.expected_outcome},
          {"annihilating_factor", factor_or_null(v.annihilating)},
          {"expected_annihilating_factor", factor_or_null(v.expected_annihilating)},
          {"duality", duality_json(v.duality)},
          {"sectors", sectors_json(v.sectors)},
          {"factors", factors},
          {"votes", v.votes},
          {"consistent_labeling", v.consistent_labeling},
          {"tol_zero", v.tol_zero},
          {"tol_nonzero", v.tol_nonzero},
          {"notes", v.notes}};
}

json lemma_json(const LemmaVerdict& v) {
  json curves = json::array();
  for (const auto& row : v.curves) {
    json checks = json::array();
    for (const auto& c : row.checks)
      checks.push_back({{"name", c.name},
                        {"status", c.status},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"detail", c.detail}});
    curves.push_back({{"curve_id", row.curve_id},
                      {"w_id", row.w_id},
                      {"factor", to_string(row.factor)},
                      {"closed_norm", row.closed_norm},
                      {"cesaro_difference", row.cesaro_difference ? json(*row.cesaro_difference)
                                                                  : json(nullptr)},
                      {"checks", checks}});
  }
  return {{"status", v.status},
          {"duality", duality_json(v.duality)},
          {"sectors", sectors_json(v.sectors)},
          {"curves", curves},
          {"notes", v.notes}};
}

json calibration_json(const CalibrationResult& c) {
  json candidates = json::array();
  for (const auto& k : c.candidates)
    candidates.push_back({{"c0", k.c0}, {"max_residual", k.max_residual}});
  json cesaro = json::array(), closed = json::array();
  for (const auto& m : c.cesaro) cesaro.push_back(matrix_json(m));
  for (const auto& m : c.closed_unit) closed.push_back(matrix_json(m));
  return {{"chosen", c.chosen},
          {"frozen", c.frozen},
          {"matches_frozen", c.matches_frozen},
          {"factor", to_string(c.factor)},
          {"w_id", c.w_id},
          {"curve_ids", c.curve_ids},
          {"candidates", candidates},
          {"cesaro", cesaro},
          {"closed_form_c0_1", closed}};
}

json manifest_json(const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
  json modules = json::object();
  for (const char* m : {"linalg4", "geometry", "gauge", "transport", "levy", "harness", "cli"})
    modules[m] = kVersion;
  return {{"config_hash", config_hash(cfg)},
          {"config", config_to_json(cfg)},
          {"modules", modules},
          {"pairing_constant", cfg.numerics.pairing_constant},
          {"seed", cfg.curves.seed},
          {"outputs", outputs}};
}

json report_document(const std::string& command, const std::string& status,
                     const ExperimentConfig& cfg, const std::vector<std::string>& outputs,
                     json result, const std::string& timestamp) {
  return {{"command", command},
          {"status", status},
          {"manifest", manifest_json(cfg, outputs)},
          {"result", std::move(result)},
          {"timestamp", timestamp}};
}

json without_timestamp(json doc) {
  doc.erase("timestamp");
  return doc;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw DomainError("CsvTable: row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        out << c;
        continue;
      }
      out << '"';
      for (char ch : c) out << (ch == '"' ? "\"\"" : std::string(1, ch));
      out << '"';
    }
    out << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out.str();
}

void CsvTable::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << str();
}

void write_json(const std::string& path, const json& doc) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write");
  out << doc.dump(2) << '\n';
}

}  // namespace levylap::cli
