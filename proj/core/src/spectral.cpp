// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "dipolarbus/parallel.hpp"
#include "dipolarbus/random.hpp"

namespace dipolarbus {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

class DavidsonSpace {
 public:
  DavidsonSpace(const SparseHamiltonian& h, Index capacity)
      : h_(h), v_(static_cast<Index>(h.dim()), capacity), av_(static_cast<Index>(h.dim()), capacity) {}

  [[nodiscard]] Index size() const noexcept { return m_; }
  [[nodiscard]] Index capacity() const noexcept { return v_.cols(); }
  [[nodiscard]] const MatrixXd& v() const noexcept { return v_; }
  [[nodiscard]] const MatrixXd& av() const noexcept { return av_; }

  /// Orthogonalises t against the current space (two passes) and appends it
  /// if a meaningful component survives.
  bool add(VectorXd t) {
    if (m_ >= capacity()) return false;
    const double initial = t.norm();
    if (!(initial > 0.0) || !std::isfinite(initial)) return false;
    for (int pass = 0; pass < 2; ++pass) {
      if (m_ > 0) {
        const VectorXd c = v_.leftCols(m_).transpose() * t;
        t.noalias() -= v_.leftCols(m_) * c;
      }
    }
    const double remaining = t.norm();
    if (remaining < 1e-10 * initial) return false;
    v_.col(m_) = t / remaining;
    h_.apply(std::span<const double>(v_.col(m_).data(), static_cast<std::size_t>(v_.rows())),
             std::span<double>(av_.col(m_).data(), static_cast<std::size_t>(av_.rows())));
    ++m_;
    return true;
  }

  /// Replaces the space by its rotation onto the first `keep` columns of y.
  void restart(const MatrixXd& y, Index keep) {
    MatrixXd nv = v_.leftCols(m_) * y.leftCols(keep);
    MatrixXd nav = av_.leftCols(m_) * y.leftCols(keep);
    v_.leftCols(keep) = nv;
    av_.leftCols(keep) = nav;
    m_ = keep;
  }

 private:
  const SparseHamiltonian& h_;
  MatrixXd v_;
  MatrixXd av_;
  Index m_ = 0;
};

VectorXd hashed_start(Index n) {
  VectorXd v(n);
  for (Index i = 0; i < n; ++i) {
    v(i) = static_cast<double>(splitmix64(static_cast<std::uint64_t>(i) + 0x5eed) >> 11) * 0x1.0p-53 -
           0.5;
  }
  return v;
}

}  // namespace

SpectralResult lowest_two(const SparseHamiltonian& h, const EigenOptions& options) {
  const auto n = static_cast<Index>(h.dim());
  SpectralResult result;
  if (n == 0) throw Error("spectral: empty Hamiltonian");
  if (n == 1) {
    result.e0 = h.diagonal()[0];
    result.psi0 = {1.0};
    return result;
  }

  const double hnorm = std::max(h.norm_estimate(), std::numeric_limits<double>::min());
  const double target = options.tol * hnorm;
  const Index capacity = std::min<Index>(n, std::max(6, options.max_subspace));
  const Index keep = std::min<Index>(capacity - 2, std::max<Index>(4, capacity / 3));
  const auto diag = h.diagonal();

  // Start from the configurations of lowest diagonal energy. Unit vectors
  // carry no reflection symmetry, and the hashed vector adds weight everywhere.
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto n_unit = std::min<Index>({n, 4, capacity - 1});
  std::partial_sort(order.begin(), order.begin() + n_unit, order.end(), [&](Index a, Index b) {
    const double da = diag[static_cast<std::size_t>(a)];
    const double db = diag[static_cast<std::size_t>(b)];
    return da < db || (da == db && a < b);
  });
  DavidsonSpace space(h, capacity);
  for (Index k = 0; k < n_unit; ++k) {
    space.add(VectorXd::Unit(n, order[static_cast<std::size_t>(k)]));
  }
  space.add(hashed_start(n));

  double best_residual = std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    const Index m = space.size();
    MatrixXd proj = space.v().leftCols(m).transpose() * space.av().leftCols(m);
    proj = 0.5 * (proj + proj.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(proj);
    const VectorXd& theta = es.eigenvalues();
    const MatrixXd& y = es.eigenvectors();

    const Index wanted = std::min<Index>(2, m);
    std::array<VectorXd, 2> x;
    std::array<VectorXd, 2> r;
    std::array<double, 2> rn{0.0, 0.0};
    for (Index j = 0; j < wanted; ++j) {
      x[j] = space.v().leftCols(m) * y.col(j);
      r[j] = space.av().leftCols(m) * y.col(j) - theta(j) * x[j];
      rn[j] = r[j].norm();
    }
    const double worst = wanted == 2 ? std::max(rn[0], rn[1]) : rn[0];
    best_residual = std::min(best_residual, worst);
    const bool exhausted = m == n;
    if ((wanted == 2 && worst <= target) || exhausted) {
      result.e0 = theta(0);
      result.e1 = theta(1);
      result.has_e1 = true;
      const VectorXd x0 = x[0].normalized();
      const VectorXd x1 = x[1].normalized();
      result.psi0.assign(x0.data(), x0.data() + n);
      result.psi1.assign(x1.data(), x1.data() + n);
      result.residual = worst;
      result.iterations = iter;
      return result;
    }

    if (m + 2 > space.capacity()) space.restart(y, keep);

    bool grew = false;
    for (Index j = 0; j < wanted; ++j) {
      if (rn[j] <= target) continue;
      VectorXd t(n);
      for (Index i = 0; i < n; ++i) {
        double denom = diag[static_cast<std::size_t>(i)] - theta(j);
        if (std::abs(denom) < 1e-8) denom = std::copysign(1e-8, denom);
        t(i) = r[j](i) / denom;
      }
      if (space.add(std::move(t)) || space.add(r[j])) grew = true;
    }
    if (!grew) {
      // The space cannot grow further; if it already spans everything the
      // current Ritz pairs are exact, otherwise report stagnation.
      if (space.size() >= n) continue;
      break;
    }
  }
  std::ostringstream os;
  os << "spectral: eigensolver did not converge (best residual " << best_residual << ", target "
     << target << ")";
  throw NumericalError(os.str());
}

std::vector<double> gap_curve(const SectorHamiltonian& hamiltonian, std::span<const double> times,
                              const EigenOptions& options) {
  std::vector<double> gaps;
  gaps.reserve(times.size());
  for (double t : times) {
    const auto sr = lowest_two(hamiltonian.at_time(t), options);
    if (!sr.has_e1) throw NumericalError("spectral: gap undefined for a one-dimensional basis");
    gaps.push_back(sr.e1 - sr.e0);
  }
  return gaps;
}

GapResult min_gap_over_ramp(const ChainGeometry& geometry, const BasisSet& basis,
                            const DriveParams& params, std::span<const QubitSector> sectors,
                            const GapOptions& options) {
  if (options.grid_points < 3) throw ConfigError("spectral: gap grid needs >= 3 points");
  if (sectors.empty()) throw ConfigError("spectral: no sectors requested");
  const int g = options.grid_points;
  const double h = params.t0 / (g - 1);
  std::vector<double> times(static_cast<std::size_t>(g));
  for (int k = 0; k < g; ++k) times[static_cast<std::size_t>(k)] = k * h;

  std::vector<SectorHamiltonian> hams;
  hams.reserve(sectors.size());
  for (QubitSector s : sectors) hams.emplace_back(basis, geometry, s, params);

  // One task per (sector, grid point); results land in fixed slots.
  const std::size_t ns = sectors.size();
  std::vector<SpectralResult> coarse(ns * static_cast<std::size_t>(g));
  parallel_for(coarse.size(), options.workers, [&](std::size_t task) {
    const std::size_t s = task / static_cast<std::size_t>(g);
    const std::size_t k = task % static_cast<std::size_t>(g);
    coarse[task] = lowest_two(hams[s].at_time(times[k]), options.eigen);
    coarse[task].psi0.clear();
    coarse[task].psi1.clear();
    if (!coarse[task].has_e1) {
      throw NumericalError("spectral: gap undefined for a one-dimensional basis");
    }
  });

  GapResult best;
  best.gap = std::numeric_limits<double>::infinity();
  std::size_t best_s = 0;
  int best_k = 0;
  double best_e0 = 0.0;
  for (std::size_t s = 0; s < ns; ++s) {
    for (int k = 0; k < g; ++k) {
      const auto& sr = coarse[s * static_cast<std::size_t>(g) + static_cast<std::size_t>(k)];
      const double gap = sr.e1 - sr.e0;
      if (gap < best.gap) {
        best.gap = gap;
        best_s = s;
        best_k = k;
        best_e0 = sr.e0;
      }
    }
  }
  best.evaluations = static_cast<int>(coarse.size());

  // Local refinement: both half-step neighbours plus the parabolic vertex.
  auto coarse_gap = [&](int k) {
    const auto& sr = coarse[best_s * static_cast<std::size_t>(g) + static_cast<std::size_t>(k)];
    return sr.e1 - sr.e0;
  };
  std::vector<double> probes;
  if (best_k > 0) probes.push_back(times[static_cast<std::size_t>(best_k)] - 0.5 * h);
  if (best_k < g - 1) probes.push_back(times[static_cast<std::size_t>(best_k)] + 0.5 * h);
  if (best_k > 0 && best_k < g - 1) {
    const double gm = coarse_gap(best_k - 1);
    const double g0 = coarse_gap(best_k);
    const double gp = coarse_gap(best_k + 1);
    const double curvature = gm - 2.0 * g0 + gp;
    if (curvature > 0.0) {
      const double shift = 0.5 * h * (gm - gp) / curvature;
      if (std::abs(shift) < h) probes.push_back(times[static_cast<std::size_t>(best_k)] + shift);
    }
  }
  std::vector<SpectralResult> refined(probes.size());
  parallel_for(probes.size(), options.workers, [&](std::size_t i) {
    refined[i] = lowest_two(hams[best_s].at_time(probes[i]), options.eigen);
  });
  best.argmin_time = times[static_cast<std::size_t>(best_k)];
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const double gap = refined[i].e1 - refined[i].e0;
    if (gap < best.gap) {
      best.gap = gap;
      best.argmin_time = probes[i];
      best_e0 = refined[i].e0;
    }
  }
  best.evaluations += static_cast<int>(probes.size());
  best.argmin_sector = sectors[best_s];
  if (best.gap < kDegeneracyThreshold * std::max(1.0, std::abs(best_e0))) {
    best.gap = 0.0;
    best.degenerate = true;
  }
  return best;
}

double InteractionEnergy::energy(QubitSector sector) const noexcept {
  switch (sector.index()) {
    case 0: return e_dd;
    case 1: return e_du;
    case 2: return e_ud;
    default: return e_uu;
  }
}

HoldPointAnalysis analyze_hold_point(const ChainGeometry& geometry, const BasisSet& basis,
                                     const DriveParams& params, std::optional<double> at_time,
                                     const EigenOptions& options, int workers) {
  const double t = at_time.value_or(params.t0);
  HoldPointAnalysis out;
  parallel_for(4, workers, [&](std::size_t i) {
    const SectorHamiltonian sh(basis, geometry, kAllSectors[i], params);
    out.sectors[i] = lowest_two(sh.at_time(t), options);
  });
  auto& e = out.energies;
  e.e_dd = out.sectors[0].e0;
  e.e_du = out.sectors[1].e0;
  e.e_ud = out.sectors[2].e0;
  e.e_uu = out.sectors[3].e0;
  e.e_int = e.e_uu - e.e_ud - e.e_du + e.e_dd;
  out.hold_gap = std::numeric_limits<double>::infinity();
  for (const auto& sr : out.sectors) {
    if (sr.has_e1) out.hold_gap = std::min(out.hold_gap, sr.e1 - sr.e0);
  }
  return out;
}

InteractionEnergy interaction_energy(const ChainGeometry& geometry, const BasisSet& basis,
                                     const DriveParams& params, std::optional<double> at_time,
                                     const EigenOptions& options, int workers) {
  return analyze_hold_point(geometry, basis, params, at_time, options, workers).energies;
}

}  // namespace dipolarbus
