// dyonlab: config-driven experiment runner for charged-particle dynamics in
// dyon backgrounds and the matching radial-spectrum checks.
//
// Exit codes: 0 all checks pass / run complete, 1 a verification check
// failed, 2 config error, 3 runtime or numerical error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "dyonlab/config.hpp"
#include "dyonlab/dynamics.hpp"
#include "dyonlab/error.hpp"
#include "dyonlab/fields.hpp"
#include "dyonlab/quantum.hpp"
#include "dyonlab/report.hpp"
#include "dyonlab/verify.hpp"

namespace {

using namespace dyonlab;

namespace fs = std::filesystem;

struct CliOverrides {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::string format;
};

fs::path artifact_path(const ExperimentConfig& cfg, const CliOverrides& cli,
                       const std::string& name) {
  const fs::path dir = cli.out_dir.empty() ? fs::path(cfg.out_dir) : fs::path(cli.out_dir);
  return dir / (cfg.prefix + name);
}

ExperimentConfig load_config(const CliOverrides& cli, Command command) {
  ExperimentConfig cfg = parse_config_file(cli.config_path);
  cfg.command = command;
  if (cli.seed) cfg.seed = *cli.seed;
  if (cli.format == "csv") cfg.format = OutputFormat::Csv;
  if (cli.format == "json") cfg.format = OutputFormat::Json;
  return cfg;
}

PhaseState initial_state(const ExperimentConfig& cfg) {
  if (cfg.x0 && cfg.pi0) return {*cfg.x0, *cfg.pi0};
  if (cfg.x0 || cfg.pi0) throw ConfigError("x0 and pi0 must be given together");
  if (cfg.energy && cfg.jmag) {
    return build_initial_state(cfg.system, *cfg.energy, *cfg.jmag,
                               cfg.system.total_monopole_number(), cfg.branch);
  }
  throw ConfigError("simulate/poincare needs either x0+pi0 or energy+jmag");
}

IntegrationConfig integration_config(const ExperimentConfig& cfg) {
  IntegrationConfig ic;
  ic.integrator = cfg.scheme;
  ic.h = cfg.resolved_h();
  ic.t_end = cfg.t_end;
  ic.output_stride = cfg.stride;
  return ic;
}

int run_simulate(const ExperimentConfig& cfg, const CliOverrides& cli) {
  const PhaseState s0 = initial_state(cfg);
  const TrajectoryRecord traj = integrate(cfg.system, s0, integration_config(cfg));
  const fs::path out = artifact_path(cfg, cli, "trajectory.csv");
  write_text_atomic(out, trajectory_csv(cfg.system, traj));
  std::cout << out.string() << "\n";
  if (traj.aborted) {
    std::cerr << "integration aborted: " << traj.diagnostic << "\n";
    return 3;
  }
  return 0;
}

int run_spectrum(const ExperimentConfig& cfg, const CliOverrides& cli) {
  const double s = cfg.resolved_quantum_s();
  const RadialProblem prob = radial_problem(cfg.system);

  std::vector<EigenResult> levels;
  std::vector<double> analytic;
  double alpha = 0.0;
  {
    const std::function<void(const PotentialSpec&)> scan = [&](const PotentialSpec& p) {
      if (p.kind == PotentialSpec::Kind::Coulomb) alpha += p.alpha;
      for (const auto& t : p.terms) scan(t);
    };
    scan(cfg.system.potential);
  }
  const bool hydrogenic = cfg.system.metric.is_flat() && alpha != 0.0;
  for (double l = std::abs(s); l <= cfg.l_max + 1e-12; l += 1.0) {
    const int count = static_cast<int>(std::floor(cfg.n_max - l - 1.0 + 1e-9)) + 1;
    if (count < 1) continue;
    const auto ev = radial_eigenvalues(prob, l, s, count, cfg.grid);
    for (const auto& lv : ev) {
      levels.push_back(lv);
      if (hydrogenic) analytic.push_back(analytic_spectrum(cfg.system.mu, alpha, lv.n_r + l + 1.0));
    }
  }
  const bool json = cfg.format == OutputFormat::Json;
  const fs::path out = artifact_path(cfg, cli, json ? "spectrum.json" : "spectrum.csv");
  write_text_atomic(out, json ? spectrum_json(levels, s, analytic)
                              : spectrum_csv(levels, s, analytic));
  std::cout << out.string() << "\n";
  return 0;
}

int run_fields_check(const ExperimentConfig& cfg, const CliOverrides& cli) {
  std::mt19937_64 rng(cfg.seed);
  const auto& centers = cfg.system.centers;
  const MetricSpec& metric = cfg.system.metric;
  VerificationReport report;

  // sample points off centers and strings, inside the metric chart
  const double box = metric.curvature == Curvature::Hyperboloid ? 0.55 : 2.5;
  std::uniform_real_distribution<double> u(-box, box);
  std::vector<Vec3> points;
  while (points.size() < 50) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    if (metric.curvature == Curvature::Hyperboloid && norm(p) >= 0.95) continue;
    bool ok = true;
    for (const auto& c : centers) {
      const Vec3 d = p - c.position;
      if (norm(d) < 0.25) ok = false;
      if (d.z < 0.0 && std::hypot(d.x, d.y) < 0.2) ok = false;
    }
    if (ok) points.push_back(p);
  }

  double worst_dual = 0.0;
  for (const auto& p : points) worst_dual = std::max(worst_dual, duality_residual(p, centers, metric));
  {
    CheckEntry e;
    e.name = "scalar-vector-duality";
    e.equation = "(20)";
    e.residual = worst_dual;
    e.tolerance = 1e-5;
    e.mode = "le";
    e.pass = worst_dual <= e.tolerance;
    report.entries.push_back(e);
  }

  double worst_flux = 0.0;
  for (const auto& c : centers) {
    if (c.g == 0.0) continue;
    // largest sphere around this center that avoids the others
    double radius = 1.0;
    for (const auto& o : centers) {
      const double d = norm(o.position - c.position);
      if (d > 0.0) radius = std::min(radius, 0.45 * d);
    }
    const double flux = monopole_flux(c, radius);
    worst_flux = std::max(worst_flux, std::abs(flux / (4.0 * 3.14159265358979323846 * c.g) - 1.0));
  }
  {
    CheckEntry e;
    e.name = "monopole-flux";
    e.equation = "(18)";
    e.residual = worst_flux;
    e.tolerance = 1e-6;
    e.mode = "le";
    e.pass = worst_flux <= e.tolerance;
    report.entries.push_back(e);
  }

  double worst_green = 0.0;
  for (double r : {0.1, 0.3, 0.5, 0.8}) {
    worst_green = std::max(worst_green, std::abs(coulomb_green_quadrature(metric, r) -
                                                 coulomb_green_closed(metric, r)));
  }
  {
    CheckEntry e;
    e.name = "green-quadrature-vs-closed";
    e.equation = "(17)/(21)";
    e.residual = worst_green;
    e.tolerance = 1e-8;
    e.mode = "le";
    e.pass = worst_green <= e.tolerance;
    report.entries.push_back(e);
  }

  const fs::path out = artifact_path(cfg, cli, "fields_report.json");
  write_text_atomic(out, report_json(report));
  std::cout << out.string() << "\n";
  return report.all_pass() ? 0 : 1;
}

int run_selection_rules(const ExperimentConfig& cfg, const CliOverrides& cli) {
  const double s = cfg.resolved_quantum_s();
  const auto table = selection_rule_table(s, cfg.l_max, cfg.selection_threshold);
  const bool json = cfg.format == OutputFormat::Json;
  const fs::path out =
      artifact_path(cfg, cli, json ? "selection_rules.json" : "selection_rules.csv");
  write_text_atomic(out, json ? selection_rules_json(table, s)
                              : selection_rules_csv(table, s));
  std::cout << out.string() << "\n";
  return 0;
}

int run_poincare(const ExperimentConfig& cfg, const CliOverrides& cli) {
  const PhaseState s0 = initial_state(cfg);
  SectionSpec section;
  section.normal = cfg.section_normal;
  section.offset = cfg.section_offset;
  section.direction = cfg.section_direction;
  const auto points = poincare_section(cfg.system, s0, section, cfg.crossings,
                                       integration_config(cfg), cfg.section_t_max);
  const fs::path out = artifact_path(cfg, cli, "poincare.csv");
  write_text_atomic(out, poincare_csv(points));
  std::cout << out.string() << "\n";
  if (static_cast<int>(points.size()) < cfg.crossings) {
    std::cerr << "warning: " << points.size() << " of " << cfg.crossings
              << " crossings found within t_max\n";
  }
  return 0;
}

int run_verify_all(const ExperimentConfig& cfg, const CliOverrides& cli) {
  VerifyOptions opts;
  opts.seed = cfg.seed;
  const VerificationReport report = run_all_checks(opts);
  const fs::path out = artifact_path(cfg, cli, "verification_report.json");
  write_text_atomic(out, report_json(report));
  std::cout << out.string() << "\n";
  for (const auto& e : report.entries) {
    std::cout << (e.pass ? "[pass] " : "[FAIL] ") << e.name << " residual=" << e.residual
              << " tol=" << e.tolerance << " (" << e.mode << ")\n";
  }
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyonlab: dyon-background dynamics and spectrum toolkit"};
  app.require_subcommand(1);

  CliOverrides cli;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", cli.config_path, "experiment config file")->required();
    sub->add_option("--out", cli.out_dir, "output directory (overrides [output] dir)");
    sub->add_option("--seed", cli.seed, "random seed (overrides config)");
    sub->add_option("--format", cli.format, "csv|json (overrides [output] format)")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* c_sim = app.add_subcommand("simulate", "integrate a trajectory, write CSV");
  CLI::App* c_spec = app.add_subcommand("spectrum", "radial eigenvalues, write CSV/JSON");
  CLI::App* c_fld = app.add_subcommand("fields-check", "field identities, write JSON report");
  CLI::App* c_sel = app.add_subcommand("selection-rules", "dipole transition table");
  CLI::App* c_poi = app.add_subcommand("poincare", "section crossings of the flow");
  CLI::App* c_ver = app.add_subcommand("verify-all", "full verification battery");
  for (CLI::App* sub : {c_sim, c_spec, c_fld, c_sel, c_poi, c_ver}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_sim->parsed()) return run_simulate(load_config(cli, Command::Simulate), cli);
    if (c_spec->parsed()) return run_spectrum(load_config(cli, Command::Spectrum), cli);
    if (c_fld->parsed()) return run_fields_check(load_config(cli, Command::FieldsCheck), cli);
    if (c_sel->parsed())
      return run_selection_rules(load_config(cli, Command::SelectionRules), cli);
    if (c_poi->parsed()) return run_poincare(load_config(cli, Command::Poincare), cli);
    if (c_ver->parsed()) return run_verify_all(load_config(cli, Command::VerifyAll), cli);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
