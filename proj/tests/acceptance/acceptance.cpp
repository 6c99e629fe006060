// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/classical_oracle.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/ensemble.hpp"
#include "dipolarbus/error_model.hpp"
#include "dipolarbus/evolution.hpp"
#include "dipolarbus/gate_analysis.hpp"
#include "dipolarbus/geometry.hpp"
#include "dipolarbus/hamiltonian.hpp"
#include "dipolarbus/numerics.hpp"
#include "dipolarbus/parallel.hpp"
#include "dipolarbus/spectral.hpp"

using namespace dipolarbus;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

DriveParams reference_drive() {
  DriveParams p;
  p.omega0 = 1.0;
  p.delta0 = 2.3;
  p.t0 = 100.0;
  p.c_p = 100.0;
  p.p = 3;
  return p;
}

constexpr double kOffsetD = 3.0;

int worker_count() {
  if (const char* env = std::getenv("DIPOLARBUS_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return default_workers();
}

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double wrap(double phase) { return std::remainder(phase, 2.0 * kPi); }

// 1. Norm conservation and exact undoing of the ramp by the sign-flipped reverse.
Outcome unitarity_and_reversal() {
  std::ostringstream os;
  bool pass = true;
  for (int n : {6, 8, 10, 12}) {
    const auto g = make_equidistant(n, kOffsetD);
    const auto b = BasisSet::build(g, FullPolicy{});
    ProtocolSchedule s;
    s.t0 = 100.0;
    s.t_pi = 0.0;
    ProtocolOptions opts;
    opts.workers = worker_count();
    const auto r = run_protocol(b, g, reference_drive(), s, opts);
    double drift = 0.0;
    double worst = 1.0;
    for (const auto& sector : r.sectors) {
      drift = std::max(drift, sector.norm_drift);
      worst = std::min(worst, std::norm(sector.overlap_with_initial));
    }
    pass = pass && drift <= 1e-9 && worst >= 1.0 - 1e-6;
    os << "N=" << n << " drift " << fmt(drift) << " 1-F " << fmt(1.0 - worst) << "; ";
  }
  return {pass, os.str()};
}

// 2. Truncated bases against the full basis at N = 12.
Outcome truncation_equivalence() {
  const auto g = make_equidistant(12, kOffsetD);
  const auto p = reference_drive();
  const int workers = worker_count();
  GapOptions gap;
  gap.workers = workers;
  auto measure = [&](const BasisPolicy& policy) {
    const auto b = BasisSet::build(g, policy);
    const double e = interaction_energy(g, b, p, {}, {}, workers).e_int;
    const double d = min_gap_over_ramp(g, b, p, kAllSectors, gap).gap;
    return std::array<double, 3>{e, d, static_cast<double>(b.size())};
  };
  const auto full = measure(FullPolicy{});
  const auto exact = measure(TruncatedPolicy{12, 0.0});
  const double a_r = crystal_spacing(p.p, p.c_p, p.delta0);
  const auto physical = measure(TruncatedPolicy{4, 0.5 * a_r});
  const double e1 = relative(exact[0], full[0]);
  const double g1 = relative(exact[1], full[1]);
  const double e2 = relative(physical[0], full[0]);
  const double g2 = relative(physical[1], full[1]);
  const bool pass = e1 <= 1e-10 && g1 <= 1e-10 && e2 <= 1e-3 && g2 <= 1e-3;
  return {pass, "(12,0): dE_int " + fmt(e1) + " dGap " + fmt(g1) + "; (4,a_R/2) dim " +
                    fmt(physical[2]) + ": dE_int " + fmt(e2) + " dGap " + fmt(g2)};
}

// 3. Landau-Zener law over a drive-strength sweep at N = 10.
Outcome landau_zener() {
  const auto g = make_equidistant(10, kOffsetD);
  const auto b = BasisSet::build(g, FullPolicy{});
  std::vector<double> grid;
  for (int k = 0; k < 8; ++k) grid.push_back(0.45 * std::pow(1.0 / 0.45, k / 7.0));
  ProtocolSchedule s;
  s.t0 = 100.0;
  GateOptions opts;
  opts.workers = worker_count();
  opts.gap.workers = 1;
  const auto sweep = lz_sweep(g, b, reference_drive(), s, grid, opts);
  if (!sweep.fit) return {false, std::to_string(sweep.failures.size()) + " sweep points failed"};
  const bool pass = sweep.fit->r_squared >= 0.95 && sweep.monotone;
  return {pass, "r2 " + fmt(sweep.fit->r_squared) + " b " + fmt(sweep.fit->b) + " c " +
                    fmt(sweep.fit->c) + " monotone " + (sweep.monotone ? "yes" : "no") +
                    " F range [" + fmt(sweep.points.front().fidelity) + ", " +
                    fmt(sweep.points.back().fidelity) + "]"};
}

// 4. Conditional phase at full and half hold for an adiabatic ramp at N = 8.
Outcome conditional_phase_check() {
  const auto g = make_equidistant(8, kOffsetD);
  const auto b = BasisSet::build(g, FullPolicy{});
  auto p = reference_drive();
  const int workers = worker_count();
  GapOptions gap;
  gap.workers = workers;
  const double delta_g = min_gap_over_ramp(g, b, p, kAllSectors, gap).gap;
  const double t0 = std::max(100.0, 50.0 / delta_g);
  p.t0 = t0;
  const double e_int = interaction_energy(g, b, p, {}, {}, workers).e_int;
  const double t_pi = kPi / std::abs(e_int);
  ProtocolOptions opts;
  opts.workers = workers;
  auto phase_at = [&](double hold) {
    ProtocolSchedule s;
    s.t0 = t0;
    s.t_pi = hold;
    return conditional_phase(run_protocol(b, g, p, s, opts).sectors);
  };
  const double full = phase_at(t_pi);
  const double half = phase_at(0.5 * t_pi);
  // The hold accumulates exp(-i E_int t): -pi/2 for E_int > 0, +pi/2 otherwise.
  const double half_target = e_int > 0.0 ? -0.5 * kPi : 0.5 * kPi;
  const double miss_full = std::abs(wrap(full - kPi));
  const double miss_half = std::abs(wrap(half - half_target));
  const bool pass = miss_full <= 0.1 && miss_half <= 0.1;
  return {pass, "gap " + fmt(delta_g) + " t0 " + fmt(t0) + " phi(t_pi) " + fmt(full) +
                    " phi(t_pi/2) " + fmt(half) + " misses " + fmt(miss_full) + ", " +
                    fmt(miss_half)};
}

// 5. Continuum crystal spacing against the closed-form a_R.
Outcome crystal_spacing_oracle() {
  double worst = 0.0;
  for (int p : {3, 6}) {
    for (double ratio : {10.0, 30.0, 100.0, 300.0}) {
      const double a_r = crystal_spacing(p, ratio, 1.0);
      const auto crystal = optimal_continuum_crystal(25.5 * a_r, 1.0, ratio, p);
      worst = std::max(worst, relative(crystal.mean_spacing, a_r));
    }
  }
  return {worst <= 0.1, "max relative spacing error " + fmt(worst)};
}

// 6. E_int L / d^2 under span doubling at fixed density.
Outcome continuum_scaling() {
  const std::vector<double> spans{80.0, 160.0};
  const auto rows = continuum_scaling_series(spans, 17, 0.5, 100.0, 3);
  const double a = rows[0].e_int_times_span_over_d2();
  const double b = rows[1].e_int_times_span_over_d2();
  const double change = std::abs(b - a) / std::abs(a);
  return {change <= 0.15, "E_int L/d^2 " + fmt(a) + " -> " + fmt(b) + " (change " + fmt(change) + ")"};
}

// 7. Closed-form optimum against numeric minimisation of the total error.
Outcome error_model_consistency() {
  double worst = 0.0;
  int points = 0;
  std::string where;
  for (double delta : {1.0, 3.0}) {
    for (int i = 0; i <= 6; ++i) {
      for (int j = 0; j <= 6; ++j) {
        ErrorBudget b;
        b.alpha0 = std::pow(10.0, -1.0 + 0.5 * i);
        b.gamma0 = std::pow(10.0, -5.0 + 0.5 * j);
        b.l0 = 1.0;
        b.span_l = 1.0;
        b.delta_exp = delta;
        if (!(b.l0 * b.alpha0 / (b.span_l * b.span_l * b.gamma0) > 1.0)) continue;
        const auto closed = optimal_gate_time(b);
        const auto numeric = minimize_total_error(b);
        const double err = relative(closed.eps, numeric.eps);
        ++points;
        if (err > worst) {
          worst = err;
          where = "alpha0 " + fmt(b.alpha0) + " gamma0 " + fmt(b.gamma0) + " delta " + fmt(delta);
        }
      }
    }
  }
  return {worst <= 0.01,
          std::to_string(points) + " points, max relative eps error " + fmt(worst) + " at " + where};
}

// 8. Preset fidelities and the ensemble property suite.
Outcome presets_and_ensemble() {
  std::ostringstream os;
  bool pass = true;
  for (const auto& name : preset_names()) {
    const auto& pr = preset(name);
    if (pr.measured_gap == 0.0 || pr.measured_e_int == 0.0 || pr.measured_l0 == 0.0) {
      os << name << ": no measured bus properties; ";
      pass = false;
      continue;
    }
    const auto opt = optimize_t0(budget_from_preset(pr), pr.measured_e_int, pr.measured_gap);
    const double t_g_si = units_of(pr).time_to_si(opt.t_g);
    bool ok = false;
    if (name == "nv") {
      ok = std::abs(opt.f_max - 0.98) <= 0.02 && std::abs(t_g_si / 500e-6 - 1.0) <= 0.5;
    } else {
      ok = std::abs(opt.f_max - 0.90) <= 0.05;
    }
    pass = pass && ok;
    os << name << " F " << fmt(opt.f_max) << " t_g " << fmt(t_g_si * 1e6) << "us " << (ok ? "ok" : "off")
       << "; ";
  }

  EnsembleSpec spec;
  spec.realizations = 100;
  spec.base_seed = 2026;
  spec.geometry.mode = GeometryMode::disordered;
  spec.geometry.n_sites = 12;
  spec.geometry.offset_d = kOffsetD;
  spec.geometry.r_min = 0.1;
  spec.basis.kind = BasisChoice::Kind::automatic;
  spec.drive = reference_drive();
  spec.workers = worker_count();
  const auto first = run_ensemble(spec, Pipeline::gap_and_eint);
  spec.workers = std::max(1, spec.workers / 2);
  const auto second = run_ensemble(spec, Pipeline::gap_and_eint);
  std::ostringstream a, b;
  write_ensemble_csv(a, first);
  write_ensemble_csv(b, second);
  const bool deterministic = a.str() == b.str();
  bool band = true;
  for (const auto& agg : first.aggregates) {
    band = band && agg.stats.p05 <= agg.stats.mean && agg.stats.mean <= agg.stats.p95;
  }
  auto flat = spec;
  flat.realizations = 5;
  flat.geometry.mode = GeometryMode::equidistant;
  const auto equi = run_ensemble(flat, Pipeline::gap_and_eint);
  bool zero_var = true;
  for (const auto& agg : equi.aggregates) zero_var = zero_var && agg.stats.stddev == 0.0;
  const bool counted = first.total == first.records.size() + first.failures.size();
  pass = pass && deterministic && band && zero_var && counted;
  os << "ensemble N=12 M=100: deterministic " << (deterministic ? "yes" : "no") << ", band holds mean "
     << (band ? "yes" : "no") << ", equidistant zero variance " << (zero_var ? "yes" : "no")
     << ", failures " << first.failures.size();
  return {pass, os.str()};
}

// 9. Protocol against the bare dipolar gate over disordered chains.
Outcome disorder_robustness() {
  const auto& nv = preset("nv");
  const double gamma0 = units_of(nv).rate_to_internal(nv.gamma0_si);
  EnsembleSpec spec;
  spec.realizations = 50;
  spec.base_seed = 9000;
  spec.geometry.mode = GeometryMode::disordered;
  spec.geometry.n_sites = 12;
  spec.geometry.offset_d = kOffsetD;
  spec.geometry.r_min = 0.1;
  spec.basis.kind = BasisChoice::Kind::automatic;
  spec.drive = reference_drive();
  spec.curve.gamma0 = {gamma0};
  spec.curve.delta_exp = nv.delta_exp;
  spec.workers = worker_count();
  const auto report = run_ensemble(spec, Pipeline::error_curve);
  int wins = 0;
  std::vector<double> f_protocol, f_bare;
  for (const auto& rec : report.records) {
    const auto& pt = rec.curve.front();
    f_protocol.push_back(pt.f_max);
    f_bare.push_back(pt.f_bare);
    if (pt.f_max > pt.f_bare) ++wins;
  }
  const double share = static_cast<double>(wins) / static_cast<double>(report.total);
  const auto sp = summarize(f_protocol);
  const auto sb = summarize(f_bare);
  return {share >= 0.9, std::to_string(wins) + "/" + std::to_string(report.total) +
                            " realizations beat the bare gate; mean F " + fmt(sp.mean) +
                            " vs bare " + fmt(sb.mean) + " at gamma0 " + fmt(gamma0)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"unitarity and reversal", unitarity_and_reversal},
      {"truncation equivalence", truncation_equivalence},
      {"Landau-Zener law", landau_zener},
      {"conditional phase", conditional_phase_check},
      {"crystal spacing oracle", crystal_spacing_oracle},
      {"continuum scaling", continuum_scaling},
      {"error model self-consistency", error_model_consistency},
      {"preset reproduction and ensemble", presets_and_ensemble},
      {"disorder robustness", disorder_robustness},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) selected.push_back(k);
  }
  int failures = 0;
  for (int k : selected) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << k << '\n';
      return 2;
    }
    const auto& [name, check] = criteria[static_cast<std::size_t>(k - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << k << " [" << name << "]: " << (o.pass ? "PASS" : "FAIL") << "  "
              << o.detail << "  (" << fmt(secs) << " s)" << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
