// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>

#include <CLI11.hpp>

#include "config.hpp"
#include "dipolarbus/classical_oracle.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/ensemble.hpp"
#include "dipolarbus/error_model.hpp"
#include "dipolarbus/gate_analysis.hpp"
#include "dipolarbus/numerics.hpp"
#include "dipolarbus/parallel.hpp"
#include "report.hpp"

namespace dipolarbus::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out_dir = ".";
  int workers = 0;
  std::optional<std::uint64_t> seed;
  bool dry_run = false;
  std::vector<double> omega0_grid;
  std::optional<int> realizations;
  std::string preset;
  std::vector<double> gamma0_grid;
  std::string oracle_mode;
};

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (requested < 0) throw ConfigError("--workers must be >= 1");
  if (const char* env = std::getenv("DIPOLARBUS_WORKERS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1 || v > 4096) {
      throw ConfigError(std::string("DIPOLARBUS_WORKERS must be a positive integer, got '") + env + "'");
    }
    return static_cast<int>(v);
  }
  return default_workers();
}

RunConfig load(const Options& o) {
  if (o.config.empty()) throw ConfigError("--config FILE is required for " + o.command);
  RunConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.ensemble.base_seed = *o.seed;
    if (cfg.error_curve.disorder) cfg.error_curve.disorder->base_seed = *o.seed;
  }
  return cfg;
}

Provenance provenance(const Options& o, const RunConfig* cfg, std::uint64_t seed) {
  Provenance p;
  p.command = o.command;
  p.seed = seed;
  if (cfg != nullptr) {
    p.config_hash = config_hash(cfg->document);
    p.units = cfg->units;
  } else {
    p.config_hash = "none";
    p.units = o.preset;
  }
  return p;
}

fs::path output_dir(const Options& o) {
  fs::path dir(o.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

int dry_run(const Options& o, const RunConfig& cfg, std::ostream& out, std::uint64_t seed) {
  Json j = describe(cfg);
  j["provenance"] = to_json(provenance(o, &cfg, seed));
  j["dry_run"] = true;
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct Setup {
  ChainGeometry geometry;
  BasisSet basis;
};

Setup build(const RunConfig& cfg) {
  auto geometry = make_geometry(cfg.geometry, cfg.seed);
  auto basis = BasisSet::build(geometry, resolve_basis(cfg.basis, geometry, cfg.drive), cfg.basis.max_dim);
  return {std::move(geometry), std::move(basis)};
}

int gate_run(const Options& o, std::ostream& out, std::ostream&) {
  const RunConfig cfg = load(o);
  if (o.dry_run) return dry_run(o, cfg, out, cfg.seed);
  const int workers = resolve_workers(o.workers);
  const auto setup = build(cfg);
  GateOptions gate = cfg.gate;
  gate.workers = workers;
  const auto r = run_gate(setup.geometry, setup.basis, cfg.drive, cfg.schedule, gate);
  Json j = to_json(r);
  j["provenance"] = to_json(provenance(o, &cfg, cfg.seed));
  j["config"] = describe(cfg);
  j["geometry"] = {{"positions", setup.geometry.positions()},
                   {"qubit_a_pos", setup.geometry.qubit_a_pos()},
                   {"qubit_b_pos", setup.geometry.qubit_b_pos()},
                   {"span_l", setup.geometry.span_L()}};
  const auto dir = output_dir(o);
  write_json(dir / "gate_result.json", j);
  out << "fidelity " << format_double(r.fidelity) << "  conditional_phase "
      << (r.phase_defined ? format_double(r.conditional_phase) : std::string("undefined"))
      << "  e_int " << format_double(r.e_int) << "  gap " << format_double(r.gap) << "  t_g "
      << format_double(r.t_g) << '\n';
  return kExitOk;
}

int lz_sweep_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load(o);
  if (!o.omega0_grid.empty()) cfg.omega0_grid = o.omega0_grid;
  if (cfg.omega0_grid.size() < kMinSweepPoints) {
    throw ConfigError("fit requires >= " + std::to_string(kMinSweepPoints) + " points (got " +
                      std::to_string(cfg.omega0_grid.size()) + ")");
  }
  for (double w : cfg.omega0_grid) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("lz-sweep: omega0 values must be > 0");
  }
  std::size_t removed = 0;
  const auto grid = dedupe_grid(cfg.omega0_grid, &removed);
  if (removed > 0) {
    err << "warning: removed " << removed << " duplicate omega0 value(s) from the sweep grid\n";
  }
  if (grid.size() < kMinSweepPoints) {
    throw ConfigError("fit requires >= " + std::to_string(kMinSweepPoints) +
                      " points after removing duplicates (got " + std::to_string(grid.size()) + ")");
  }
  cfg.omega0_grid = grid;
  if (o.dry_run) return dry_run(o, cfg, out, cfg.seed);
  const int workers = resolve_workers(o.workers);
  const auto setup = build(cfg);
  GateOptions gate = cfg.gate;
  gate.workers = workers;
  const auto sweep = lz_sweep(setup.geometry, setup.basis, cfg.drive, cfg.schedule, grid, gate);

  const auto dir = output_dir(o);
  {
    auto os = open_output(dir / "lz_sweep.csv");
    write_sweep_csv(os, sweep.points);
  }
  Json j = to_json(sweep);
  j["provenance"] = to_json(provenance(o, &cfg, cfg.seed));
  j["omega0_grid"] = grid;
  j["duplicates_removed"] = removed;
  write_json(dir / "lz_fit.json", j);
  if (!sweep.failures.empty()) {
    err << "error: " << sweep.failures.size() << " sweep point(s) failed; first: omega0 "
        << format_double(sweep.failures.front().omega0) << ": " << sweep.failures.front().reason << '\n';
    return kExitNumerical;
  }
  out << "b " << format_double(sweep.fit->b) << "  c " << format_double(sweep.fit->c) << "  r^2 "
      << format_double(sweep.fit->r_squared) << "  monotone " << (sweep.monotone ? "yes" : "no")
      << '\n';
  return kExitOk;
}

EnsembleSpec ensemble_spec(const RunConfig& cfg, int workers) {
  EnsembleSpec spec;
  spec.realizations = cfg.ensemble.realizations;
  spec.base_seed = cfg.ensemble.base_seed;
  spec.geometry = cfg.geometry;
  spec.basis = cfg.basis;
  spec.drive = cfg.drive;
  spec.schedule = cfg.schedule;
  spec.gate = cfg.gate;
  spec.workers = workers;
  return spec;
}

int ensemble_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load(o);
  if (o.realizations) {
    if (*o.realizations < 1) throw ConfigError("--realizations must be >= 1");
    cfg.ensemble.realizations = *o.realizations;
  }
  if (o.dry_run) return dry_run(o, cfg, out, cfg.ensemble.base_seed);
  const int workers = resolve_workers(o.workers);
  EnsembleSpec spec = ensemble_spec(cfg, workers);
  if (cfg.ensemble.pipeline == Pipeline::error_curve) {
    if (cfg.error_curve.gamma0_grid.empty() || !cfg.error_curve.delta_exp) {
      throw ConfigError("ensemble: pipeline error_curve needs 'error_curve.gamma0_grid' and "
                        "'error_curve.delta_exp'");
    }
    spec.curve = {cfg.error_curve.gamma0_grid, *cfg.error_curve.delta_exp, cfg.error_curve.b,
                  cfg.error_curve.c};
  }
  const auto report = run_ensemble(spec, cfg.ensemble.pipeline);

  const auto dir = output_dir(o);
  Json j = to_json(report);
  j["provenance"] = to_json(provenance(o, &cfg, cfg.ensemble.base_seed));
  j["config"] = describe(cfg);
  write_json(dir / "ensemble.json", j);
  {
    auto os = open_output(dir / "ensemble.csv");
    write_ensemble_csv(os, report);
  }
  for (const auto& f : report.failures) {
    err << "warning: realization " << f.index << " (seed " << f.seed << ") failed: " << f.reason << '\n';
  }
  out << "realizations " << report.total << "  succeeded " << report.records.size() << "  failed "
      << report.failures.size() << '\n';
  for (const auto& a : report.aggregates) {
    out << a.quantity << ": mean " << format_double(a.stats.mean) << "  p05 "
        << format_double(a.stats.p05) << "  p95 " << format_double(a.stats.p95) << '\n';
  }
  return kExitOk;
}

struct CurveRow {
  double gamma0 = 0.0;
  double f_equidistant = 0.0;
  std::optional<double> p05;
  std::optional<double> p95;
  double f_bare = 0.0;
  double t0_opt = 0.0;
  double t_g = 0.0;
  bool unbounded = false;
};

std::vector<double> default_gamma0_grid(double centre) {
  std::vector<double> g;
  for (int k = -8; k <= 8; ++k) g.push_back(centre * std::pow(10.0, 0.25 * k));
  return g;
}

void write_curve_csv(std::ostream& os, const std::vector<CurveRow>& rows) {
  os << "gamma0,f_protocol_equidistant,f_protocol_disordered_p05,f_protocol_disordered_p95,f_bare,"
        "t0_opt,t_g\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    os << format_double(r.gamma0) << ',' << format_double(r.f_equidistant) << ',' << opt(r.p05)
       << ',' << opt(r.p95) << ',' << format_double(r.f_bare) << ',' << format_double(r.t0_opt)
       << ',' << format_double(r.t_g) << '\n';
  }
}

int error_curve_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.preset.empty() == o.config.empty()) {
    throw ConfigError("error-curve needs exactly one of --preset NAME or --config FILE");
  }
  std::optional<RunConfig> cfg;
  Preset p;
  UnitSystem units;  // identity for internal units
  bool si = false;
  ErrorBudget base;
  double gap = 0.0;
  double e_int = 0.0;
  double c_p = 0.0;
  int power = 3;
  std::vector<double> grid = o.gamma0_grid;

  if (!o.preset.empty()) {
    p = preset(o.preset);
    if (p.measured_gap <= 0.0 || p.measured_e_int == 0.0 || p.measured_l0 <= 0.0) {
      throw ConfigError("error-curve: preset '" + p.name + "' carries no measured bus properties");
    }
    units = units_of(p);
    si = true;
    base = budget_from_preset(p);
    gap = p.measured_gap;
    e_int = p.measured_e_int;
    c_p = p.c3_over_a3_si / p.omega0_si;
    if (grid.empty()) grid = default_gamma0_grid(p.gamma0_si);
  } else {
    cfg = load(o);
    const auto& ec = cfg->error_curve;
    std::vector<std::string> missing;
    if (!ec.gap) missing.emplace_back("error_curve.gap");
    if (!ec.e_int) missing.emplace_back("error_curve.e_int");
    if (!ec.span_l) missing.emplace_back("error_curve.span_l");
    if (!ec.l0) missing.emplace_back("error_curve.l0");
    if (!ec.delta_exp && !cfg->preset) missing.emplace_back("error_curve.delta_exp");
    if (!missing.empty()) {
      std::string msg = "error-curve: missing budget inputs:";
      for (const auto& m : missing) msg += " '" + m + "'";
      throw ConfigError(msg);
    }
    if (cfg->preset) {
      units = units_of(*cfg->preset);
      si = true;
    }
    base.b = ec.b;
    base.c = ec.c;
    base.span_l = *ec.span_l;
    base.l0 = *ec.l0;
    base.delta_exp = ec.delta_exp.value_or(cfg->preset ? cfg->preset->delta_exp : 1.0);
    gap = *ec.gap;
    e_int = *ec.e_int;
    base.alpha0 = base.c * base.span_l * gap;
    c_p = cfg->drive.c_p;
    power = cfg->drive.p;
    if (grid.empty()) grid = ec.gamma0_grid;
    if (grid.empty()) throw ConfigError("error-curve: empty gamma0 grid ('error_curve.gamma0_grid' or --gamma0-grid)");
  }
  for (double g : grid) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("error-curve: gamma0 values must be >= 0");
  }
  const std::uint64_t seed = cfg ? cfg->seed : 0;
  if (o.dry_run) {
    Json j = cfg ? describe(*cfg) : Json::object();
    if (!cfg) j["preset"] = p.name;
    j["gamma0_grid"] = grid;
    j["provenance"] = to_json(provenance(o, cfg ? &*cfg : nullptr, seed));
    j["dry_run"] = true;
    out << j.dump(2) << '\n';
    return kExitOk;
  }

  std::vector<CurveRow> rows;
  for (double g_in : grid) {
    ErrorBudget b = base;
    b.gamma0 = si ? units.rate_to_internal(g_in) : g_in;
    const auto opt = optimize_t0(b, e_int, gap);
    const auto bare = bare_gate(c_p, power, b.span_l, b.gamma0, b.delta_exp);
    CurveRow row;
    row.gamma0 = g_in;
    row.f_equidistant = opt.f_max;
    row.f_bare = bare.fidelity;
    row.t0_opt = si ? units.time_to_si(opt.t0) : opt.t0;
    row.t_g = si ? units.time_to_si(opt.t_g) : opt.t_g;
    row.unbounded = opt.unbounded;
    rows.push_back(row);
  }

  std::optional<EnsembleReport> disorder;
  if (cfg && cfg->error_curve.disorder) {
    const auto& ds = *cfg->error_curve.disorder;
    EnsembleSpec spec = ensemble_spec(*cfg, resolve_workers(o.workers));
    spec.realizations = ds.realizations;
    spec.base_seed = ds.base_seed;
    spec.geometry.n_sites = ds.n_sites;
    if (spec.geometry.mode == GeometryMode::equidistant) spec.geometry.mode = GeometryMode::disordered;
    spec.curve.delta_exp = base.delta_exp;
    spec.curve.b = base.b;
    spec.curve.c = base.c;
    for (double g_in : grid) spec.curve.gamma0.push_back(si ? units.rate_to_internal(g_in) : g_in);
    disorder = run_ensemble(spec, Pipeline::error_curve);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].p05 = disorder->curve[i].f_max.p05;
      rows[i].p95 = disorder->curve[i].f_max.p95;
    }
    for (const auto& f : disorder->failures) {
      err << "warning: disorder realization " << f.index << " failed: " << f.reason << '\n';
    }
  }

  const auto dir = output_dir(o);
  {
    auto os = open_output(dir / "error_curve.csv");
    write_curve_csv(os, rows);
  }
  Json j;
  j["provenance"] = to_json(provenance(o, cfg ? &*cfg : nullptr, seed));
  j["units"] = si ? Json{{"gamma0", "1/s"}, {"time", "s"}} : Json{{"gamma0", "internal"}, {"time", "internal"}};
  j["budget"] = {{"b", base.b},           {"c", base.c},           {"span_l", base.span_l},
                 {"l0", base.l0},         {"delta_exp", base.delta_exp}, {"alpha0", base.alpha0},
                 {"gap", gap},            {"e_int", e_int},        {"c_p", c_p},
                 {"p", power}};
  if (!o.preset.empty()) j["preset"] = p.name;
  Json rj = Json::array();
  for (const auto& r : rows) {
    rj.push_back({{"gamma0", r.gamma0}, {"f_protocol_equidistant", r.f_equidistant},
                  {"f_bare", r.f_bare}, {"t0_opt", r.t0_opt}, {"t_g", r.t_g},
                  {"unbounded", r.unbounded}});
  }
  j["rows"] = rj;
  if (disorder) j["disorder"] = to_json(*disorder);
  write_json(dir / "error_curve.json", j);
  out << "wrote " << rows.size() << " rows to " << (dir / "error_curve.csv").string() << '\n';
  return kExitOk;
}

int oracle_cmd(const Options& o, std::ostream& out, std::ostream&) {
  RunConfig cfg = load(o);
  if (!o.oracle_mode.empty()) cfg.oracle.mode = parse_oracle_mode(o.oracle_mode);
  if (o.dry_run) return dry_run(o, cfg, out, cfg.seed);
  const auto& os = cfg.oracle;
  RelaxOptions relax;
  relax.tolerance = os.relax_tolerance;
  const auto dir = output_dir(o);
  Json j;
  j["provenance"] = to_json(provenance(o, &cfg, cfg.seed));
  j["mode"] = to_string(os.mode);

  switch (os.mode) {
    case OracleMode::spacing: {
      auto csv = open_output(dir / "oracle_spacing.csv");
      csv << "p,c_over_delta,a_r,continuum_spacing,n_exc,relative_error\n";
      Json rows = Json::array();
      for (int p : os.p_values) {
        for (double ratio : os.c_over_delta) {
          const double a_r = crystal_spacing(p, ratio, 1.0);
          const auto crystal = optimal_continuum_crystal(os.span_over_a_r * a_r, 1.0, ratio, p, relax);
          const double rel = std::abs(crystal.mean_spacing - a_r) / a_r;
          csv << p << ',' << format_double(ratio) << ',' << format_double(a_r) << ','
              << format_double(crystal.mean_spacing) << ',' << crystal.state.n_excitations << ','
              << format_double(rel) << '\n';
          rows.push_back({{"p", p}, {"c_over_delta", ratio}, {"a_r", a_r},
                          {"continuum_spacing", crystal.mean_spacing},
                          {"n_exc", crystal.state.n_excitations}, {"relative_error", rel}});
        }
      }
      j["rows"] = rows;
      write_json(dir / "oracle_spacing.json", j);
      out << "wrote " << rows.size() << " rows to " << (dir / "oracle_spacing.csv").string() << '\n';
      break;
    }
    case OracleMode::lattice: {
      const auto geometry = make_geometry(cfg.geometry, cfg.seed);
      Json sectors = Json::object();
      for (QubitSector s : kAllSectors) {
        const auto gs = lattice_ground_state(geometry, s, cfg.drive.c_p, cfg.drive.p, cfg.drive.delta0);
        std::string bits;
        for (int i = 0; i < geometry.n_sites(); ++i) bits.push_back(((gs.config >> i) & 1U) ? '1' : '0');
        sectors[to_string(s)] = {{"config", bits},
                                 {"excitation_positions", gs.excitation_positions},
                                 {"energy", gs.energy},
                                 {"n_excitations", gs.n_excitations}};
      }
      j["sectors"] = sectors;
      j["crystal_spacing"] = crystal_spacing(cfg.drive.p, cfg.drive.c_p, cfg.drive.delta0);
      j["positions"] = geometry.positions();
      write_json(dir / "oracle_lattice.json", j);
      out << "wrote " << (dir / "oracle_lattice.json").string() << '\n';
      break;
    }
    case OracleMode::scaling: {
      const auto rows = continuum_scaling_series(os.spans, os.n_exc, os.d, cfg.drive.c_p, cfg.drive.p, relax);
      {
        auto csv = open_output(dir / "oracle_scaling.csv");
        write_scaling_csv(csv, rows);
      }
      Json rj = Json::array();
      for (const auto& r : rows) {
        rj.push_back({{"span", r.span}, {"n_exc", r.n_exc}, {"e_int", r.e_int},
                      {"e_int_times_span_over_d2", r.e_int_times_span_over_d2()}});
      }
      j["rows"] = rj;
      write_json(dir / "oracle_scaling.json", j);
      out << "wrote " << rows.size() << " rows to " << (dir / "oracle_scaling.csv").string() << '\n';
      break;
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adiabatic dipolar-crystal quantum bus: gate simulation and error budgets", "dipolarbus"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  Options o;
  std::uint64_t seed = 0;
  int realizations = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file");
    sub->add_option("--out", o.out_dir, "Output directory (default: current directory)");
    sub->add_option("--workers", o.workers, "Worker threads (default: $DIPOLARBUS_WORKERS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Override the geometry / ensemble seed");
    sub->add_flag("--dry-run", o.dry_run, "Validate and echo the configuration without computing");
  };
  auto* gate = app.add_subcommand("gate-run", "Run the full gate protocol once");
  common(gate);
  auto* lz = app.add_subcommand("lz-sweep", "Sweep Omega0 and fit the Landau-Zener law");
  common(lz);
  lz->add_option("--omega0-grid", o.omega0_grid, "Comma-separated Omega0 values")->delimiter(',');
  auto* ens = app.add_subcommand("ensemble", "Disorder ensemble with percentile bands");
  common(ens);
  ens->add_option("--realizations", realizations, "Number of realizations M");
  auto* curve = app.add_subcommand("error-curve", "Maximum fidelity versus decoherence rate");
  common(curve);
  curve->add_option("--preset", o.preset, "Physical preset (rydberg or nv)");
  curve->add_option("--gamma0-grid", o.gamma0_grid, "Comma-separated gamma0 values")->delimiter(',');
  auto* oracle = app.add_subcommand("oracle", "Classical reference calculations");
  common(oracle);
  oracle->add_option("mode", o.oracle_mode, "spacing, lattice or scaling (default: config)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version_string() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  auto* chosen = app.get_subcommands().front();
  o.command = chosen->get_name();
  if (chosen->count("--seed") > 0) o.seed = seed;
  if (ens->count("--realizations") > 0) o.realizations = realizations;

  try {
    if (o.command == "gate-run") return gate_run(o, out, err);
    if (o.command == "lz-sweep") return lz_sweep_cmd(o, out, err);
    if (o.command == "ensemble") return ensemble_cmd(o, out, err);
    if (o.command == "error-curve") return error_curve_cmd(o, out, err);
    if (o.command == "oracle") return oracle_cmd(o, out, err);
    err << "error: unknown command\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace dipolarbus::cli
