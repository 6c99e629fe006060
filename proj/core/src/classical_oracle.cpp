// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/classical_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "dipolarbus/common.hpp"
#include "dipolarbus/numerics.hpp"

namespace dipolarbus {

double crystal_spacing(int p, double c_p, double delta) {
  if (!(delta > 0.0)) throw ConfigError("oracle: crystal spacing needs delta > 0");
  if (p < 2) throw ConfigError("oracle: p must be >= 2");
  if (!(c_p > 0.0)) throw ConfigError("oracle: c_p must be > 0");
  const double zeta = std::riemann_zeta(static_cast<double>(p));
  return std::pow(zeta * (p + 1) * c_p / delta, 1.0 / p);
}

TruncatedPolicy default_truncation(const ChainGeometry& geometry, const DriveParams& params) {
  const double a_r = crystal_spacing(params.p, params.c_p, params.delta0);
  TruncatedPolicy t;
  t.n_max = std::min(geometry.n_sites(),
                     static_cast<int>(std::ceil(geometry.span_L() / a_r)) + 2);
  t.r_cut = 0.5 * a_r;
  return t;
}

ClassicalGroundState lattice_ground_state(const ChainGeometry& geometry, QubitSector sector,
                                          double c_p, int p, double delta,
                                          std::optional<int> n_max, std::uint64_t budget) {
  const int n = geometry.n_sites();
  if (n > 63) throw ConfigError("oracle: at most 63 sites");
  const int limit = n_max.value_or(n);
  if (limit < 0) throw ConfigError("oracle: n_max must be >= 0");
  DriveParams params;
  params.c_p = c_p;
  params.p = p;
  const auto v = boundary_potential(geometry, sector, params);
  const auto pos = geometry.positions();
  std::vector<double> pair(static_cast<std::size_t>(n * n), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double e = pair_interaction(pos[static_cast<std::size_t>(j)] - pos[static_cast<std::size_t>(i)], params);
      pair[static_cast<std::size_t>(i * n + j)] = e;
      pair[static_cast<std::size_t>(j * n + i)] = e;
    }
  }

  // Energy relative to the vacuum; each excitation costs -delta plus its couplings.
  struct Frame {
    SpinConfig mask;
    int next;
    int count;
    double energy;
  };
  std::vector<Frame> stack{{0, 0, 0, 0.0}};
  SpinConfig best_mask = 0;
  double best = 0.0;
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (++visited > budget) {
      throw NumericalError("oracle: lattice enumeration budget exceeded");
    }
    if (f.energy < best || (f.energy == best && f.mask < best_mask)) {
      best = f.energy;
      best_mask = f.mask;
    }
    if (f.count == limit) continue;
    for (int s = n - 1; s >= f.next; --s) {
      double e = f.energy - delta + v[static_cast<std::size_t>(s)];
      for (SpinConfig m = f.mask; m; m &= m - 1) {
        e += pair[static_cast<std::size_t>(std::countr_zero(m) * n + s)];
      }
      stack.push_back({f.mask | (SpinConfig{1} << s), s + 1, f.count + 1, e});
    }
  }

  ClassicalGroundState out;
  out.config = best_mask;
  out.n_excitations = std::popcount(best_mask);
  for (int i = 0; i < n; ++i) {
    if ((best_mask >> i) & 1U) out.excitation_positions.push_back(pos[static_cast<std::size_t>(i)]);
  }
  // Recompute in the Hamiltonian's convention: -(delta/2) sum_i s_i + interactions.
  double e = -0.5 * delta * (2 * out.n_excitations - n);
  for (int i = 0; i < n; ++i) {
    if (!((best_mask >> i) & 1U)) continue;
    for (int j = i + 1; j < n; ++j) {
      if ((best_mask >> j) & 1U) e += pair[static_cast<std::size_t>(i * n + j)];
    }
  }
  for (int i = 0; i < n; ++i) {
    if ((best_mask >> i) & 1U) e += v[static_cast<std::size_t>(i)];
  }
  out.energy = e;
  return out;
}

double continuum_energy(std::span<const double> x, double span, QubitSector sector, double d,
                        double c_p, int p) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) e += c_p / std::pow(x[j] - x[i], p);
    if (sector.alpha == Spin::up) e += c_p / std::pow(x[i] + d, p);
    if (sector.beta == Spin::up) e += c_p / std::pow(span + d - x[i], p);
  }
  return e;
}

namespace {

// Gradient and dense Hessian of the continuum energy.
void energy_derivatives(const Eigen::VectorXd& x, double span, QubitSector sector, double d,
                        double c_p, int p, Eigen::VectorXd& g, Eigen::MatrixXd& h) {
  const Eigen::Index n = x.size();
  g.setZero(n);
  h.setZero(n, n);
  const double k1 = p * c_p;
  const double k2 = p * (p + 1) * c_p;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double r = x[j] - x[i];
      const double f = k1 / std::pow(r, p + 1);
      const double c = k2 / std::pow(r, p + 2);
      g[i] += f;
      g[j] -= f;
      h(i, i) += c;
      h(j, j) += c;
      h(i, j) -= c;
      h(j, i) -= c;
    }
    if (sector.alpha == Spin::up) {
      const double r = x[i] + d;
      g[i] -= k1 / std::pow(r, p + 1);
      h(i, i) += k2 / std::pow(r, p + 2);
    }
    if (sector.beta == Spin::up) {
      const double r = span + d - x[i];
      g[i] += k1 / std::pow(r, p + 1);
      h(i, i) += k2 / std::pow(r, p + 2);
    }
  }
}

// Largest step fraction in (0, 1] that keeps neighbouring excitations at
// least half of their current separation apart and lets the end excitations
// reach, but not cross, the walls.
double step_limit(const Eigen::VectorXd& x, const Eigen::VectorXd& dx, double span) {
  const Eigen::Index n = x.size();
  double alpha = 1.0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double closing = dx[i] - dx[i + 1];
    if (closing > 0.0) alpha = std::min(alpha, 0.5 * (x[i + 1] - x[i]) / closing);
  }
  if (dx[0] < 0.0) alpha = std::min(alpha, x[0] / -dx[0]);
  if (dx[n - 1] > 0.0) alpha = std::min(alpha, (span - x[n - 1]) / dx[n - 1]);
  return alpha;
}

bool ordered_inside(const Eigen::VectorXd& x, double span) {
  if (x[0] < 0.0 || x[x.size() - 1] > span) return false;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
    if (!(x[i + 1] > x[i])) return false;
  }
  return true;
}

// Active-set Newton iteration. The energy is convex on ordered configurations,
// so the only constraints that can bind are the walls at 0 and span.
ClassicalGroundState relax_from(std::vector<double> start, double span, QubitSector sector,
                                double d, double c_p, int p, const RelaxOptions& options) {
  const auto n = static_cast<Eigen::Index>(start.size());
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.data(), n);
  auto energy = [&](const Eigen::VectorXd& y) {
    return continuum_energy(std::span<const double>(y.data(), static_cast<std::size_t>(n)), span,
                            sector, d, c_p, p);
  };
  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  double e = energy(x);
  bool converged = false;
  for (int it = 0; it < options.max_iterations; ++it) {
    energy_derivatives(x, span, sector, d, c_p, p, g, h);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool pinned_lo = i == 0 && x[i] <= 0.0 && g[i] >= 0.0;
      const bool pinned_hi = i == n - 1 && x[i] >= span && g[i] <= 0.0;
      if (!pinned_lo && !pinned_hi) free.push_back(i);
    }
    Eigen::VectorXd dx = Eigen::VectorXd::Zero(n);
    if (!free.empty()) {
      const auto m = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hf(m, m);
      Eigen::VectorXd gf(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        gf[a] = g[free[a]];
        for (Eigen::Index b = 0; b < m; ++b) hf(a, b) = h(free[a], free[b]);
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hf);
      Eigen::VectorXd step = ldlt.info() == Eigen::Success && ldlt.isPositive()
                                 ? Eigen::VectorXd(ldlt.solve(-gf))
                                 : Eigen::VectorXd(-gf / std::max(1e-300, hf.diagonal().maxCoeff()));
      for (Eigen::Index a = 0; a < m; ++a) dx[free[a]] = step[a];
    }
    // An excitation resting on a wall cannot move further out.
    if (x[0] <= 0.0 && dx[0] < 0.0) dx[0] = 0.0;
    if (x[n - 1] >= span && dx[n - 1] > 0.0) dx[n - 1] = 0.0;
    double alpha = step_limit(x, dx, span);
    Eigen::VectorXd trial;
    double e_trial = e;
    for (int back = 0; back < 60; ++back) {
      trial = x + alpha * dx;
      trial[0] = std::max(trial[0], 0.0);
      trial[n - 1] = std::min(trial[n - 1], span);
      e_trial = ordered_inside(trial, span) ? energy(trial)
                                            : std::numeric_limits<double>::infinity();
      if (e_trial <= e) break;
      alpha *= 0.5;
    }
    const double moved = (trial - x).cwiseAbs().maxCoeff();
    if (e_trial <= e) {
      x = trial;
      e = e_trial;
    }
    if (moved < options.tolerance * span) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("oracle: continuum relaxation did not converge");
  ClassicalGroundState out;
  out.energy = e;
  out.n_excitations = static_cast<int>(n);
  out.excitation_positions.assign(x.data(), x.data() + n);
  return out;
}

}  // namespace

ClassicalGroundState continuum_relax(int n_exc, double span, QubitSector sector, double d,
                                     double c_p, int p, const RelaxOptions& options) {
  if (n_exc < 1) throw ConfigError("oracle: n_exc must be >= 1");
  if (!(span > 0.0)) throw ConfigError("oracle: span must be > 0");
  if (!(d > 0.0)) throw ConfigError("oracle: d must be > 0");
  const auto n = static_cast<std::size_t>(n_exc);
  ClassicalGroundState best;
  best.energy = std::numeric_limits<double>::infinity();
  for (int start = 0; start < std::max(1, options.starts); ++start) {
    std::vector<double> x(n);
    const double spacing = n > 1 ? span / static_cast<double>(n - 1) : span;
    for (std::size_t i = 0; i < n; ++i) {
      const double base = n > 1 ? spacing * static_cast<double>(i) : 0.5 * span;
      // Deterministic perturbation of the later starts, kept inside the ordering.
      const double wiggle = start == 0 ? 0.0 : 0.2 * std::sin(1.7 * start * static_cast<double>(i + 1));
      x[i] = std::clamp(base + wiggle * 0.5 * spacing, 0.0, span);
    }
    std::sort(x.begin(), x.end());
    auto candidate = relax_from(std::move(x), span, sector, d, c_p, p, options);
    if (candidate.energy < best.energy) best = std::move(candidate);
  }
  return best;
}

ContinuumCrystal optimal_continuum_crystal(double span, double delta, double c_p, int p,
                                           const RelaxOptions& options) {
  const double a_r = crystal_spacing(p, c_p, delta);
  const int centre = std::max(2, static_cast<int>(std::lround(span / a_r)) + 1);
  const int width = std::max(3, centre / 4);
  ContinuumCrystal best;
  best.total_energy = std::numeric_limits<double>::infinity();
  int lo = std::max(2, centre - width);
  int hi = centre + width;
  for (int n = lo; n <= hi; ++n) {
    auto state = continuum_relax(n, span, kSectorDD, 1.0, c_p, p, options);
    const double total = state.energy - delta * n;
    if (total < best.total_energy) {
      best.total_energy = total;
      best.state = std::move(state);
    }
    // Extend the window while the optimum sits on its upper edge.
    if (n == hi && best.state.n_excitations == hi) ++hi;
  }
  best.mean_spacing = span / (best.state.n_excitations - 1);
  return best;
}

ContinuumScalingRow continuum_interaction(int n_exc, double span, double d, double c_p, int p,
                                          const RelaxOptions& options) {
  ContinuumScalingRow row;
  row.span = span;
  row.d = d;
  row.n_exc = n_exc;
  row.e_dd = continuum_relax(n_exc, span, kSectorDD, d, c_p, p, options).energy;
  row.e_du = continuum_relax(n_exc, span, kSectorDU, d, c_p, p, options).energy;
  row.e_ud = continuum_relax(n_exc, span, kSectorUD, d, c_p, p, options).energy;
  row.e_uu = continuum_relax(n_exc, span, kSectorUU, d, c_p, p, options).energy;
  row.e_int = row.e_uu - row.e_ud - row.e_du + row.e_dd;
  return row;
}

std::vector<ContinuumScalingRow> continuum_scaling_series(std::span<const double> spans, int n_exc,
                                                          double d, double c_p, int p,
                                                          const RelaxOptions& options) {
  if (spans.empty()) throw ConfigError("oracle: scaling needs at least one span");
  if (n_exc < 2) throw ConfigError("oracle: scaling needs n_exc >= 2");
  std::vector<ContinuumScalingRow> rows;
  for (double span : spans) {
    if (!(span > 0.0)) throw ConfigError("oracle: span must be > 0");
    const auto n = static_cast<int>(std::lround((n_exc - 1) * span / spans[0])) + 1;
    rows.push_back(continuum_interaction(std::max(n, 2), span, d, c_p, p, options));
  }
  return rows;
}

void write_scaling_csv(std::ostream& os, std::span<const ContinuumScalingRow> rows) {
  os << "span,d,n_exc,e_uu,e_ud,e_du,e_dd,e_int,e_int_times_span_over_d2\n";
  for (const auto& r : rows) {
    os << format_double(r.span) << ',' << format_double(r.d) << ',' << r.n_exc << ','
       << format_double(r.e_uu) << ',' << format_double(r.e_ud) << ',' << format_double(r.e_du)
       << ',' << format_double(r.e_dd) << ',' << format_double(r.e_int) << ','
       << format_double(r.e_int_times_span_over_d2()) << '\n';
  }
}

}  // namespace dipolarbus
