#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "levylap/errors.hpp"

using namespace levylap;
using namespace levylap::cli;

namespace {

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void diagnostic(const char* kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy Laplacian / Yang-Mills duality experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = "out", emit_config;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory for JSON and CSV");
  app.add_option("--emit-config", emit_config, "Write the effective config to this file");

  ExperimentConfig ov;
  std::string profiles, curves_name = "standard", estimator, invariant;
  auto* o_conn = app.add_option("--connection", ov.connection.kind,
                                "flat|sd|asd|perturbed_sd|perturbed_asd|random_polynomial");
  auto* o_rho = app.add_option("--rho", ov.connection.rho);
  auto* o_eps = app.add_option("--epsilon", ov.connection.epsilon, "Perturbation amplitude");
  auto* o_metric = app.add_option("--metric", ov.metric.kind, "flat|conformal");
  auto* o_alpha = app.add_option("--alpha", ov.metric.alpha);
  auto* o_factor = app.add_option("--factor", ov.rotation.factor, "left|right|both|mixed|identity");
  auto* o_profiles = app.add_option("--profiles", profiles, "Comma-separated theta profiles");
  auto* o_inv = app.add_option("--invariant", invariant, "Pairing with W'W^-1 (right) or W^-1W' (left)")
                    ->check(CLI::IsMember({"right", "left"}));
  app.add_option("--curves", curves_name, "Curve set")->check(CLI::IsMember({"standard"}));
  auto* o_seed = app.add_option("--seed", ov.curves.seed);
  auto* o_npoly = app.add_option("--polynomial", ov.curves.polynomial);
  auto* o_ntrig = app.add_option("--trigonometric", ov.curves.trigonometric);
  auto* o_basis = app.add_option("--basis", ov.basis.kind, "sine|sturm_liouville");
  auto* o_pot = app.add_option("--potential", ov.basis.potential, "zero|sin2pi|t");
  auto* o_modes = app.add_option("--modes", ov.numerics.modes);
  auto* o_h = app.add_option("--fd-step", ov.numerics.fd_step);
  auto* o_steps = app.add_option("--steps", ov.numerics.transport_steps, "Transport RK4 steps");
  auto* o_csteps = app.add_option("--cesaro-steps", ov.numerics.cesaro_steps);
  auto* o_panels = app.add_option("--panels", ov.numerics.panels);
  auto* o_c0 = app.add_option("--pairing-constant", ov.numerics.pairing_constant);
  auto* o_ces = app.add_flag("--cesaro", ov.numerics.cesaro, "Also run the Cesaro evaluator");
  auto* o_est = app.add_option("--estimator", estimator, "tail_mean|increment_tail");
  auto* o_threads = app.add_option("--threads", ov.numerics.threads);
  auto* o_tz = app.add_option("--tol-zero", ov.tolerances.zero);
  auto* o_ratio = app.add_option("--separation-ratio", ov.tolerances.separation_ratio);

  CurvatureOptions curvature_opts;
  auto* curvature = app.add_subcommand("curvature", "Tabulate F, F+-, YM and Bianchi residuals");
  curvature->add_option("--points", curvature_opts.points);
  curvature->add_option("--radius", curvature_opts.radius);

  CurveSelection transport_opts;
  auto* transport = app.add_subcommand("transport", "Solve U and check its structural properties");
  transport->add_option("--curve", transport_opts.curve, "Curve id or 'all'");

  BasisCheckOptions basis_opts;
  std::string ns;
  auto* basis = app.add_subcommand("basis-check", "Equidensity residual table");
  basis->add_option("--n", ns, "Comma-separated mode counts");
  basis->add_option("--weight", basis_opts.weight, "t|t2|step|step13");

  LevyOptions levy_opts;
  auto* levy = app.add_subcommand("levy", "Levy Laplacian report for (connection, curve, W)");
  levy->add_option("--w", levy_opts.w, "Rotation curve, e.g. left:t,t2");
  levy->add_option("--curve", levy_opts.curve, "Curve id or 'all'");

  auto* theorem = app.add_subcommand("theorem", "Duality / harmonicity exclusive-or check");
  auto* lemmas = app.add_subcommand("lemmas", "Per-lemma sub-checks");
  auto* calib = app.add_subcommand("calibrate", "Select the pairing constant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    auto set = [](CLI::Option* o, auto& dst, const auto& src) {
      if (o->count() > 0) dst = src;
    };
    set(o_conn, cfg.connection.kind, ov.connection.kind);
    set(o_rho, cfg.connection.rho, ov.connection.rho);
    set(o_eps, cfg.connection.epsilon, ov.connection.epsilon);
    set(o_metric, cfg.metric.kind, ov.metric.kind);
    set(o_alpha, cfg.metric.alpha, ov.metric.alpha);
    set(o_factor, cfg.rotation.factor, ov.rotation.factor);
    if (o_profiles->count() > 0) cfg.rotation.profiles = split(profiles);
    if (o_inv->count() > 0) cfg.rotation.right_invariant = invariant == "right";
    set(o_seed, cfg.curves.seed, ov.curves.seed);
    set(o_npoly, cfg.curves.polynomial, ov.curves.polynomial);
    set(o_ntrig, cfg.curves.trigonometric, ov.curves.trigonometric);
    set(o_basis, cfg.basis.kind, ov.basis.kind);
    set(o_pot, cfg.basis.potential, ov.basis.potential);
    set(o_modes, cfg.numerics.modes, ov.numerics.modes);
    set(o_h, cfg.numerics.fd_step, ov.numerics.fd_step);
    set(o_steps, cfg.numerics.transport_steps, ov.numerics.transport_steps);
    set(o_csteps, cfg.numerics.cesaro_steps, ov.numerics.cesaro_steps);
    set(o_panels, cfg.numerics.panels, ov.numerics.panels);
    set(o_c0, cfg.numerics.pairing_constant, ov.numerics.pairing_constant);
    set(o_ces, cfg.numerics.cesaro, ov.numerics.cesaro);
    if (o_est->count() > 0) cfg.numerics.estimator = parse_estimator(estimator);
    set(o_threads, cfg.numerics.threads, ov.numerics.threads);
    set(o_tz, cfg.tolerances.zero, ov.tolerances.zero);
    set(o_ratio, cfg.tolerances.separation_ratio, ov.tolerances.separation_ratio);
    // Re-validate the merged config through the same parser as files.
    cfg = config_from_json(config_to_json(cfg));
    if (!emit_config.empty()) write_json(emit_config, config_to_json(cfg));

    std::string command;
    CommandOutput out;
    if (curvature->parsed()) {
      command = "curvature";
      out = run_curvature(cfg, curvature_opts);
    } else if (transport->parsed()) {
      command = "transport";
      out = run_transport(cfg, transport_opts);
    } else if (basis->parsed()) {
      command = "basis-check";
      if (!ns.empty()) {
        basis_opts.n.clear();
        for (const auto& s : split(ns)) basis_opts.n.push_back(std::stoi(s));
      }
      out = run_basis_check(cfg, basis_opts);
    } else if (levy->parsed()) {
      command = "levy";
      out = run_levy(cfg, levy_opts);
    } else if (theorem->parsed()) {
      command = "theorem";
      out = run_theorem(cfg);
    } else if (lemmas->parsed()) {
      command = "lemmas";
      out = run_lemmas(cfg);
    } else if (calib->parsed()) {
      command = "calibrate";
      out = run_calibrate(cfg);
    }
    const json doc = write_outputs(command, cfg, out, out_dir, utc_timestamp());
    std::cout << command << ": " << out.status << " (config " << config_hash(cfg) << ")\n";
    for (const auto& p : doc["manifest"]["outputs"]) std::cout << "  " << p.get<std::string>() << '\n';
    return exit_code(out.status);
  } catch (const ConfigError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    diagnostic("config", e.what());
    return kExitConfig;
  } catch (const IntegrationError& e) {
    diagnostic("numerical", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    diagnostic("numerical", e.what());
    return kExitNumerical;
  }
}
