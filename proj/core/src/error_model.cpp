// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/error_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "dipolarbus/numerics.hpp"

namespace dipolarbus {

void ErrorBudget::validate() const {
  if (!(alpha0 > 0.0)) throw ConfigError("error_model: alpha0 must be > 0");
  if (!(l0 > 0.0)) throw ConfigError("error_model: l0 must be > 0");
  if (!(gamma0 >= 0.0)) throw ConfigError("error_model: gamma0 must be >= 0");
  if (!(delta_exp > 0.0)) throw ConfigError("error_model: delta_exp must be > 0");
  if (!(span_l > 0.0)) throw ConfigError("error_model: span_l must be > 0");
  if (!(b > 0.0)) throw ConfigError("error_model: b must be > 0");
  if (!(c > 0.0)) throw ConfigError("error_model: c must be > 0");
}

double total_error(const ErrorBudget& budget, double t_g) {
  const double lz = std::exp(-budget.alpha0 * t_g / budget.span_l);
  const double deco = std::pow(budget.effective_rate() * t_g, budget.delta_exp);
  return lz + deco;
}

OptimalGateTime optimal_gate_time(const ErrorBudget& budget) {
  budget.validate();
  const double L = budget.span_l;
  const double arg = budget.l0 * budget.alpha0 / (L * L * budget.gamma0);
  if (!(arg > 1.0)) {
    throw ConfigError("error_model: decoherence dominates at all gate times "
                      "(L0 alpha0 / (L^2 gamma0) <= 1)");
  }
  const double log_arg = std::log(arg);
  OptimalGateTime out;
  out.t_g = budget.delta_exp * L * log_arg / budget.alpha0;
  out.eps = std::pow(L, 2.0 * budget.delta_exp) *
            std::pow(budget.delta_exp * budget.gamma0 / (budget.l0 * budget.alpha0) * log_arg,
                     budget.delta_exp);
  return out;
}

OptimalGateTime minimize_total_error(const ErrorBudget& budget) {
  budget.validate();
  const double rate = budget.effective_rate();
  if (!(rate > 0.0)) throw ConfigError("error_model: no finite optimum without decoherence");
  // The minimum lies below 1/rate, where the decoherence term alone reaches 1.
  const double hi = std::log(1.0 / rate);
  const double lo = std::log(1e-8 * budget.span_l / budget.alpha0);
  const auto m = golden_section_minimize(
      [&](double u) { return total_error(budget, std::exp(u)); }, std::min(lo, hi - 1.0), hi,
      1e-13);
  return {std::exp(m.x), m.f};
}

double combined_fidelity(const ErrorBudget& budget, double t0, double e_int, double gap) {
  const double lz = 1.0 - budget.b * std::exp(-budget.c * gap * t0);
  const double t_g = 2.0 * t0 + kPi / std::abs(e_int);
  const double deco = std::exp(-std::pow(budget.effective_rate() * t_g, budget.delta_exp));
  return 0.5 * lz * (1.0 + deco);
}

T0Optimum optimize_t0(const ErrorBudget& budget, double e_int, double gap) {
  if (e_int == 0.0 || !std::isfinite(e_int)) {
    throw ConfigError("error_model: e_int must be finite and nonzero");
  }
  const double rate = budget.effective_rate();
  double scale = 1.0;
  if (budget.c * gap > 0.0) {
    scale = 1.0 / (budget.c * gap);
  } else if (rate > 0.0) {
    scale = 1.0 / rate;
  }
  auto f = [&](double t0) { return combined_fidelity(budget, t0, e_int, gap); };

  constexpr int kGrid = 241;
  const double lo = std::log(1e-4 * scale);
  const double hi = std::log(1e6 * scale);
  std::vector<double> ts(kGrid);
  std::vector<double> fs(kGrid);
  for (int k = 0; k < kGrid; ++k) {
    ts[static_cast<std::size_t>(k)] = std::exp(lo + (hi - lo) * k / (kGrid - 1));
    fs[static_cast<std::size_t>(k)] = f(ts[static_cast<std::size_t>(k)]);
  }
  const auto best = static_cast<int>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  const auto [fmin_it, fmax_it] = std::minmax_element(fs.begin(), fs.end());

  T0Optimum out;
  if (*fmax_it - *fmin_it <= 1e-15) {
    out.flat = true;
    out.t0 = ts.front();
  } else if (best == kGrid - 1 || fs.back() >= *fmax_it - 1e-15) {
    // Still at its maximum (or saturated to 1 in floating point) at the upper end.
    out.unbounded = true;
    out.t0 = ts.back();
  } else {
    const double a = ts[static_cast<std::size_t>(std::max(0, best - 1))];
    const double b = ts[static_cast<std::size_t>(best + 1)];
    const auto m = golden_section_minimize([&](double t) { return -f(t); }, a, b, 1e-12 * b);
    out.t0 = m.x;
  }
  out.f_max = f(out.t0);
  out.t_g = 2.0 * out.t0 + kPi / std::abs(e_int);
  return out;
}

namespace {

template <typename T>
L0Estimate l0_impl(std::span<const T> state, const BasisSet& basis, double span_l) {
  if (state.size() != basis.size()) throw Error("error_model: state does not match basis");
  double excitations = 0.0;
  const auto configs = basis.configs();
  for (std::size_t k = 0; k < state.size(); ++k) {
    excitations += std::norm(state[k]) * std::popcount(configs[k]);
  }
  L0Estimate out;
  out.excitations = excitations;
  if (excitations <= 1e-300) {
    out.infinite = true;
    out.l0 = std::numeric_limits<double>::infinity();
  } else {
    out.l0 = span_l / excitations;
  }
  return out;
}

}  // namespace

L0Estimate l0_from_density(std::span<const double> state, const BasisSet& basis, double span_l) {
  return l0_impl(state, basis, span_l);
}

L0Estimate l0_from_density(std::span<const Complex> state, const BasisSet& basis, double span_l) {
  return l0_impl(state, basis, span_l);
}

BareGate bare_gate(double c_p, int p, double separation, double gamma0, double delta_exp) {
  if (!(separation > 0.0)) throw ConfigError("error_model: separation must be > 0");
  if (!(c_p > 0.0)) throw ConfigError("error_model: c_p must be > 0");
  BareGate out;
  out.t_bare = kPi * std::pow(separation, p) / c_p;
  out.error = std::pow(gamma0 * out.t_bare, delta_exp);
  out.fidelity = 0.5 * (1.0 + std::exp(-out.error));
  return out;
}

namespace {

constexpr double kTwoPi = 2.0 * kPi;

std::vector<Preset> make_presets() {
  Preset rydberg;
  rydberg.name = "rydberg";
  rydberg.omega0_si = kTwoPi * 8e6;
  rydberg.delta0_si = kTwoPi * 17e6;
  rydberg.c3_over_a3_si = kTwoPi * 800e6;
  rydberg.a_si = 1e-6;
  rydberg.gamma0_si = 1e4;
  rydberg.delta_exp = 1.0;
  rydberg.span_l_si = 40e-6;
  rydberg.n_sites = 34;
  rydberg.offset_d = 3.0;
  // Equidistant N = 34, d = 3, default truncation; see the README for the run.
  rydberg.measured_gap = 0.011363351456484594;
  rydberg.measured_e_int = 0.16159702949585864;
  rydberg.measured_l0 = 6.585380016927921;
  rydberg.notes = "Stark-fan dipolar Rydberg states, n = 43.";

  Preset nv;
  nv.name = "nv";
  nv.omega0_si = kTwoPi * 62e3;
  nv.delta0_si = kTwoPi * 130e3;
  nv.c3_over_a3_si = 100.0 * nv.omega0_si;
  nv.a_si = 2e-9;
  nv.gamma0_si = 100.0;
  nv.delta_exp = 3.0;
  nv.span_l_si = 74e-9;
  nv.n_sites = 34;
  nv.offset_d = 3.0;
  nv.measured_gap = 0.0116179199140376;
  nv.measured_e_int = 0.13654309029439204;
  nv.measured_l0 = 6.589842028533513;
  nv.notes =
      "C3 assumed = 100 hbar Omega0 a^3 (magnetic dipole coupling of NV electron spins, "
      "~2 pi x 52 MHz nm^3, gives ~105 hbar Omega0 at a = 2 nm); override via config.";
  return {rydberg, nv};
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = make_presets();
  return all;
}

}  // namespace

const Preset& preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : presets()) names.push_back(p.name);
  return names;
}

UnitSystem units_of(const Preset& p) { return UnitSystem{p.omega0_si, p.a_si}; }

ErrorBudget budget_from_preset(const Preset& p) {
  const UnitSystem u = units_of(p);
  ErrorBudget b;
  b.span_l = u.length_to_internal(p.span_l_si);
  b.l0 = p.measured_l0;
  b.gamma0 = u.rate_to_internal(p.gamma0_si);
  b.delta_exp = p.delta_exp;
  b.b = kReferenceFitB;
  b.c = kReferenceFitC;
  b.alpha0 = b.c * b.span_l * p.measured_gap;
  return b;
}

}  // namespace dipolarbus
