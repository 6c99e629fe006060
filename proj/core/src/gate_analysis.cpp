// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/gate_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "dipolarbus/error_model.hpp"
#include "dipolarbus/numerics.hpp"
#include "dipolarbus/parallel.hpp"

namespace dipolarbus {

Matrix4c overlap_matrix(const std::array<SectorTrajectory, 4>& sectors) {
  const std::size_t n = sectors[0].final_state.size();
  for (const auto& s : sectors) {
    if (s.final_state.size() != n || n == 0) {
      throw Error("gate: sector trajectories live in different bases");
    }
  }
  Matrix4c o;
  for (int i = 0; i < 4; ++i) {
    const auto& chi_i = sectors[static_cast<std::size_t>(i)].final_state;
    for (int j = 0; j < 4; ++j) {
      const auto& chi_j = sectors[static_cast<std::size_t>(j)].final_state;
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += std::conj(chi_j[k]) * chi_i[k];
      o(i, j) = acc;
    }
  }
  return o;
}

Matrix4c qubit_density_matrix(const std::array<SectorTrajectory, 4>& sectors) {
  return 0.25 * overlap_matrix(sectors);
}

double gate_fidelity(const Matrix4c& rho) { return std::sqrt(rho.cwiseAbs2().sum()); }

double conditional_phase(const std::array<SectorTrajectory, 4>& sectors) {
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(std::abs(sectors[i].overlap_with_initial) > kMinVacuumOverlap)) {
      throw NumericalError("gate: sector " + to_string(kAllSectors[i]) +
                           " did not return to the vacuum; conditional phase undefined");
    }
  }
  const auto o = [&](QubitSector s) { return sectors[static_cast<std::size_t>(s.index())].overlap_with_initial; };
  const Complex z = o(kSectorUU) * std::conj(o(kSectorUD)) * std::conj(o(kSectorDU)) * o(kSectorDD);
  const double phi = std::arg(z);
  return phi <= -kPi ? kPi : phi;
}

GateResult run_gate(const ChainGeometry& geometry, const BasisSet& basis, const DriveParams& params,
                    const ProtocolSchedule& schedule, const GateOptions& options) {
  schedule.validate();
  DriveParams p = params;
  p.t0 = schedule.t0;
  p.validate();
  if (!(options.hold_scale >= 0.0)) throw ConfigError("gate: hold_scale must be >= 0");

  GateResult r;
  r.t0 = p.t0;
  r.basis_dim = basis.size();
  const auto hp = analyze_hold_point(geometry, basis, p, p.t0, options.gap.eigen, options.workers);
  r.energies = hp.energies;
  r.e_int = hp.energies.e_int;
  r.hold_gap = hp.hold_gap;
  const auto l0 = l0_from_density(std::span<const double>(hp.sectors[0].psi0), basis,
                                  geometry.span_L());
  r.l0 = l0.infinite ? std::numeric_limits<double>::infinity() : l0.l0;

  ProtocolSchedule s = schedule;
  if (!s.t_pi) {
    if (std::abs(r.e_int) < 1e-12) {
      throw NumericalError("gate: no effective interaction (|E_int| < 1e-12), t_pi undefined");
    }
    s.t_pi = options.hold_scale * kPi / std::abs(r.e_int);
  }

  if (options.compute_gap) {
    GapOptions g = options.gap;
    g.workers = options.workers;
    const auto gap = min_gap_over_ramp(geometry, basis, p, kAllSectors, g);
    r.gap = gap.gap;
    r.gap_time = gap.argmin_time;
    r.gap_sector = gap.argmin_sector;
    r.gap_degenerate = gap.degenerate;
  } else {
    r.gap = std::numeric_limits<double>::quiet_NaN();
  }

  const auto pr = run_protocol(basis, geometry, p, s, ProtocolOptions{options.gap.eigen, options.workers});
  r.t_pi = pr.t_pi;
  r.t_g = pr.t_g;
  r.overlaps = overlap_matrix(pr.sectors);
  r.fidelity = gate_fidelity(0.25 * r.overlaps);
  for (std::size_t i = 0; i < 4; ++i) {
    r.vacuum_overlaps[i] = pr.sectors[i].overlap_with_initial;
    r.max_norm_drift = std::max(r.max_norm_drift, pr.sectors[i].norm_drift);
  }
  try {
    r.conditional_phase = conditional_phase(pr.sectors);
    r.phase_defined = true;
  } catch (const NumericalError&) {
    r.conditional_phase = std::numeric_limits<double>::quiet_NaN();
    r.phase_defined = false;
  }
  return r;
}

double LZFit::model(double x) const noexcept { return 1.0 - b * std::exp(-c * x); }

namespace {

double sum_squares(std::span<const std::array<double, 2>> pts, double u, double v) {
  const double b = std::exp(u);
  const double c = std::exp(v);
  double s = 0.0;
  for (const auto& pt : pts) {
    const double r = b * std::exp(-c * pt[0]) - (1.0 - pt[1]);
    s += r * r;
  }
  return s;
}

}  // namespace

LZFit fit_landau_zener(std::span<const std::array<double, 2>> points) {
  if (points.size() < kMinSweepPoints) {
    throw ConfigError("fit requires >= " + std::to_string(kMinSweepPoints) + " points");
  }
  for (const auto& pt : points) {
    if (!std::isfinite(pt[0]) || !std::isfinite(pt[1])) {
      throw NumericalError("fit: non-finite data point");
    }
  }
  // Log-linear regression of log(1 - F) on x for the starting point.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int used = 0;
  for (const auto& pt : points) {
    const double y = 1.0 - pt[1];
    if (y <= 0.0) continue;
    const double ly = std::log(y);
    sx += pt[0];
    sy += ly;
    sxx += pt[0] * pt[0];
    sxy += pt[0] * ly;
    ++used;
  }
  double u = std::log(0.5);
  double v = 0.0;
  const double denom = used * sxx - sx * sx;
  if (used >= 2 && denom > 0.0) {
    const double slope = (used * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / used;
    if (slope < 0.0) {
      v = std::log(-slope);
      u = std::min(intercept, 0.0);
    }
  }
  if (v == 0.0) {
    const double mean_x = std::accumulate(points.begin(), points.end(), 0.0,
                                          [](double a, const auto& pt) { return a + pt[0]; }) /
                          static_cast<double>(points.size());
    v = std::log(1.0 / std::max(mean_x, 1e-12));
  }

  double lambda = 1e-3;
  double ss = sum_squares(points, u, v);
  int iter = 0;
  for (; iter < 1000; ++iter) {
    const double b = std::exp(u);
    const double c = std::exp(v);
    Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (const auto& pt : points) {
      const double e = b * std::exp(-c * pt[0]);
      const double r = e - (1.0 - pt[1]);
      const Eigen::Vector2d j(e, -pt[0] * c * e);
      a += j * j.transpose();
      g += j * r;
    }
    if (g.norm() <= 1e-300) break;
    bool accepted = false;
    double step_size = 0.0;
    while (lambda < 1e16) {
      Eigen::Matrix2d damped = a;
      damped.diagonal() += lambda * a.diagonal().cwiseMax(1e-300);
      const Eigen::Vector2d delta = damped.ldlt().solve(-g);
      const double nu = std::min(u + delta(0), 0.0);
      const double nv = v + delta(1);
      const double nss = sum_squares(points, nu, nv);
      if (std::isfinite(nss) && nss <= ss) {
        step_size = std::hypot(nu - u, nv - v);
        const double improvement = ss - nss;
        u = nu;
        v = nv;
        ss = nss;
        lambda = std::max(lambda / 3.0, 1e-12);
        accepted = true;
        if (improvement <= 1e-15 * ss && step_size <= 1e-12 * (1.0 + std::hypot(u, v))) {
          lambda = 1e16;
        }
        break;
      }
      lambda *= 4.0;
    }
    if (!accepted || lambda >= 1e16) break;
  }

  LZFit fit;
  fit.b = std::exp(u);
  fit.c = std::exp(v);
  fit.iterations = iter;
  fit.points.assign(points.begin(), points.end());
  double mean_f = 0.0;
  for (const auto& pt : points) mean_f += pt[1];
  mean_f /= static_cast<double>(points.size());
  double ss_tot = 0.0;
  for (const auto& pt : points) ss_tot += (pt[1] - mean_f) * (pt[1] - mean_f);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss / ss_tot : (ss == 0.0 ? 1.0 : 0.0);
  return fit;
}

std::vector<double> dedupe_grid(std::span<const double> values, std::size_t* removed) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  const auto last = std::unique(out.begin(), out.end());
  if (removed != nullptr) *removed = static_cast<std::size_t>(out.end() - last);
  out.erase(last, out.end());
  return out;
}

LZSweep lz_sweep(const ChainGeometry& geometry, const BasisSet& basis, const DriveParams& params,
                 const ProtocolSchedule& schedule, std::span<const double> omega0_values,
                 const GateOptions& options) {
  const auto grid = dedupe_grid(omega0_values);
  if (grid.size() < kMinSweepPoints) {
    throw ConfigError("fit requires >= " + std::to_string(kMinSweepPoints) + " points");
  }
  for (double w : grid) {
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("lz-sweep: omega0 values must be > 0");
  }

  std::vector<std::optional<SweepPoint>> done(grid.size());
  std::vector<std::string> errors(grid.size());
  GateOptions inner = options;
  inner.workers = 1;
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    try {
      DriveParams q = params;
      q.omega0 = grid[i];
      const auto r = run_gate(geometry, basis, q, schedule, inner);
      done[i] = SweepPoint{grid[i], r.gap, r.t0, r.fidelity, r.conditional_phase, r.e_int, r.t_pi};
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  LZSweep out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (done[i]) {
      out.points.push_back(*done[i]);
    } else {
      out.failures.push_back({grid[i], errors[i]});
    }
  }
  out.monotone = fidelity_monotone(out.points);
  if (out.failures.empty()) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(out.points.size());
    for (const auto& pt : out.points) pts.push_back({pt.gap_t0_product(), pt.fidelity});
    out.fit = fit_landau_zener(pts);
  }
  return out;
}

bool fidelity_monotone(std::span<const SweepPoint> points, double slack) {
  std::vector<SweepPoint> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return a.gap_t0_product() < b.gap_t0_product();
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].fidelity < sorted[i - 1].fidelity - slack) return false;
  }
  return true;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepPoint> points) {
  os << "omega0,gap,t0,gap_t0_product,fidelity,conditional_phase,e_int,t_pi\n";
  for (const auto& p : points) {
    os << format_double(p.omega0) << ',' << format_double(p.gap) << ',' << format_double(p.t0)
       << ',' << format_double(p.gap_t0_product()) << ',' << format_double(p.fidelity) << ','
       << format_double(p.conditional_phase) << ',' << format_double(p.e_int) << ','
       << format_double(p.t_pi) << '\n';
  }
}

}  // namespace dipolarbus
