// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dipolarbus/classical_oracle.hpp"
#include "dipolarbus/numerics.hpp"
#include "dipolarbus/parallel.hpp"
#include "dipolarbus/spectral.hpp"

namespace dipolarbus {

std::string to_string(Pipeline pipeline) {
  switch (pipeline) {
    case Pipeline::gap_and_eint: return "gap_and_eint";
    case Pipeline::full_gate: return "full_gate";
    case Pipeline::error_curve: return "error_curve";
  }
  return "unknown";
}

Pipeline parse_pipeline(const std::string& name) {
  if (name == "gap_and_eint") return Pipeline::gap_and_eint;
  if (name == "full_gate") return Pipeline::full_gate;
  if (name == "error_curve") return Pipeline::error_curve;
  throw ConfigError("unknown pipeline '" + name + "' (expected gap_and_eint, full_gate or error_curve)");
}

BasisPolicy resolve_basis(const BasisChoice& choice, const ChainGeometry& geometry,
                          const DriveParams& params) {
  switch (choice.kind) {
    case BasisChoice::Kind::full: return FullPolicy{};
    case BasisChoice::Kind::truncated: return choice.truncated;
    case BasisChoice::Kind::automatic: return default_truncation(geometry, params);
  }
  return FullPolicy{};
}

void EnsembleSpec::validate(Pipeline pipeline) const {
  if (realizations < 1) throw ConfigError("ensemble: realizations must be >= 1");
  if (workers < 1) throw ConfigError("ensemble: workers must be >= 1");
  drive.validate();
  if (pipeline == Pipeline::full_gate) schedule.validate();
  if (pipeline == Pipeline::error_curve) {
    if (curve.gamma0.empty()) throw ConfigError("ensemble: error_curve needs a gamma0 grid");
    for (double g : curve.gamma0) {
      if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("ensemble: gamma0 values must be >= 0");
    }
    if (!(curve.delta_exp > 0.0)) throw ConfigError("ensemble: delta_exp must be > 0");
    if (!(curve.b > 0.0 && curve.b <= 1.0)) throw ConfigError("ensemble: b must lie in (0, 1]");
    if (!(curve.c > 0.0)) throw ConfigError("ensemble: c must be > 0");
  }
}

RealizationRecord run_realization(const EnsembleSpec& spec, Pipeline pipeline, std::size_t k) {
  RealizationRecord rec;
  rec.index = k;
  rec.seed = spec.base_seed + k;
  const auto geometry = make_geometry(spec.geometry, rec.seed);
  rec.span_l = geometry.span_L();
  rec.min_separation = geometry.min_separation();
  const auto basis = BasisSet::build(geometry, resolve_basis(spec.basis, geometry, spec.drive),
                                     spec.basis.max_dim);
  rec.basis_dim = basis.size();

  GateOptions gate = spec.gate;
  gate.workers = 1;
  if (pipeline == Pipeline::full_gate) {
    const auto r = run_gate(geometry, basis, spec.drive, spec.schedule, gate);
    rec.gap = r.gap;
    rec.e_int = r.e_int;
    rec.hold_gap = r.hold_gap;
    rec.l0 = r.l0;
    rec.fidelity = r.fidelity;
    if (r.phase_defined) rec.conditional_phase = r.conditional_phase;
    return rec;
  }

  const auto hp = analyze_hold_point(geometry, basis, spec.drive, spec.drive.t0, gate.gap.eigen, 1);
  rec.e_int = hp.energies.e_int;
  rec.hold_gap = hp.hold_gap;
  const auto l0 = l0_from_density(std::span<const double>(hp.sectors[0].psi0), basis, rec.span_l);
  rec.l0 = l0.infinite ? std::numeric_limits<double>::infinity() : l0.l0;
  GapOptions g = gate.gap;
  g.workers = 1;
  rec.gap = min_gap_over_ramp(geometry, basis, spec.drive, kAllSectors, g).gap;

  if (pipeline == Pipeline::error_curve) {
    if (l0.infinite) throw NumericalError("ensemble: no excitations at the hold point, L0 undefined");
    for (double gamma0 : spec.curve.gamma0) {
      ErrorBudget budget;
      budget.alpha0 = spec.curve.c * rec.span_l * rec.gap;
      budget.l0 = rec.l0;
      budget.gamma0 = gamma0;
      budget.delta_exp = spec.curve.delta_exp;
      budget.span_l = rec.span_l;
      budget.b = spec.curve.b;
      budget.c = spec.curve.c;
      const auto opt = optimize_t0(budget, rec.e_int, rec.gap);
      const auto bare = bare_gate(spec.drive.c_p, spec.drive.p, rec.span_l, gamma0, spec.curve.delta_exp);
      rec.curve.push_back({gamma0, opt.f_max, opt.t0, opt.t_g, opt.unbounded, bare.fidelity});
    }
  }
  return rec;
}

double percentile_nearest_rank(std::span<const double> values, double percent) {
  if (values.empty()) throw Error("percentile of an empty sample");
  if (!(percent > 0.0 && percent <= 100.0)) throw Error("percentile must lie in (0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(percent / 100.0 * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

Statistics summarize(std::span<const double> values) {
  Statistics s;
  s.count = values.size();
  if (values.empty()) return s;
  // Accumulate deviations from the first value so that a constant sample
  // gives an exact mean and exactly zero spread.
  const double ref = values[0];
  double sum = 0.0;
  for (double v : values) sum += v - ref;
  const double shift = sum / static_cast<double>(values.size());
  s.mean = ref + shift;
  double ss = 0.0;
  for (double v : values) {
    const double dv = (v - ref) - shift;
    ss += dv * dv;
  }
  s.stddev = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  s.p05 = percentile_nearest_rank(values, 5.0);
  s.p95 = percentile_nearest_rank(values, 95.0);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

namespace {

template <typename Get>
void add_aggregate(EnsembleReport& report, const std::string& name, Get get) {
  std::vector<double> xs;
  for (const auto& r : report.records) {
    const std::optional<double> v = get(r);
    if (v && std::isfinite(*v)) xs.push_back(*v);
  }
  if (!xs.empty()) report.aggregates.push_back({name, summarize(xs)});
}

}  // namespace

EnsembleReport run_ensemble(const EnsembleSpec& spec, Pipeline pipeline) {
  spec.validate(pipeline);
  const auto m = static_cast<std::size_t>(spec.realizations);
  std::vector<std::optional<RealizationRecord>> slots(m);
  std::vector<std::string> errors(m);
  parallel_for(m, spec.workers, [&](std::size_t k) {
    try {
      slots[k] = run_realization(spec, pipeline, k);
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });

  EnsembleReport report;
  report.pipeline = pipeline;
  report.total = m;
  for (std::size_t k = 0; k < m; ++k) {
    if (slots[k]) {
      report.records.push_back(std::move(*slots[k]));
    } else {
      report.failures.push_back({k, spec.base_seed + k, errors[k]});
    }
  }
  if (report.records.empty()) {
    throw NumericalError("ensemble: all " + std::to_string(m) +
                         " realizations failed (first: " + report.failures.front().reason + ")");
  }

  add_aggregate(report, "gap", [](const RealizationRecord& r) { return std::optional(r.gap); });
  add_aggregate(report, "e_int", [](const RealizationRecord& r) { return std::optional(r.e_int); });
  add_aggregate(report, "hold_gap", [](const RealizationRecord& r) { return std::optional(r.hold_gap); });
  add_aggregate(report, "l0", [](const RealizationRecord& r) { return std::optional(r.l0); });
  add_aggregate(report, "span_l", [](const RealizationRecord& r) { return std::optional(r.span_l); });
  if (pipeline == Pipeline::full_gate) {
    add_aggregate(report, "fidelity", [](const RealizationRecord& r) { return r.fidelity; });
    add_aggregate(report, "conditional_phase",
                  [](const RealizationRecord& r) { return r.conditional_phase; });
  }
  if (pipeline == Pipeline::error_curve) {
    for (std::size_t i = 0; i < spec.curve.gamma0.size(); ++i) {
      std::vector<double> f, t0, tg, bare;
      for (const auto& r : report.records) {
        f.push_back(r.curve[i].f_max);
        t0.push_back(r.curve[i].t0_opt);
        tg.push_back(r.curve[i].t_g);
        bare.push_back(r.curve[i].f_bare);
      }
      CurveBand band;
      band.gamma0 = spec.curve.gamma0[i];
      band.f_max = summarize(f);
      band.t0_opt = summarize(t0);
      band.t_g = summarize(tg);
      band.f_bare_mean = summarize(bare).mean;
      report.curve.push_back(band);
    }
  }
  return report;
}

void write_ensemble_csv(std::ostream& os, const EnsembleReport& report) {
  std::size_t n_curve = 0;
  for (const auto& r : report.records) n_curve = std::max(n_curve, r.curve.size());
  os << "index,seed,status,span_l,min_separation,basis_dim,gap,e_int,hold_gap,l0,fidelity,"
        "conditional_phase";
  for (std::size_t i = 0; i < n_curve; ++i) {
    os << ",gamma0_" << i << ",f_max_" << i << ",t0_opt_" << i << ",t_g_" << i << ",f_bare_" << i;
  }
  os << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto rec_it = report.records.begin();
  auto fail_it = report.failures.begin();
  for (std::size_t k = 0; k < report.total; ++k) {
    if (rec_it != report.records.end() && rec_it->index == k) {
      const auto& r = *rec_it++;
      os << r.index << ',' << r.seed << ",ok," << format_double(r.span_l) << ','
         << format_double(r.min_separation) << ',' << r.basis_dim << ',' << format_double(r.gap)
         << ',' << format_double(r.e_int) << ',' << format_double(r.hold_gap) << ','
         << format_double(r.l0) << ',' << opt(r.fidelity) << ',' << opt(r.conditional_phase);
      for (const auto& c : r.curve) {
        os << ',' << format_double(c.gamma0) << ',' << format_double(c.f_max) << ','
           << format_double(c.t0_opt) << ',' << format_double(c.t_g) << ','
           << format_double(c.f_bare);
      }
      for (std::size_t i = r.curve.size(); i < n_curve; ++i) os << ",,,,,";
      os << '\n';
    } else if (fail_it != report.failures.end() && fail_it->index == k) {
      const auto& f = *fail_it++;
      os << f.index << ',' << f.seed << ",failed,,,,,,,,,";
      for (std::size_t i = 0; i < n_curve; ++i) os << ",,,,,";
      os << '\n';
    }
  }
}

}  // namespace dipolarbus
