// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/evolution.hpp"

#include <cmath>
#include <sstream>

#include "dipolarbus/parallel.hpp"

namespace dipolarbus {

namespace {

double norm(const ComplexVector& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexVector vacuum_state(const BasisSet& basis) {
  ComplexVector psi(basis.size());
  psi[basis.vacuum_index()] = 1.0;
  return psi;
}

void check_drift(double drift, const char* where) {
  if (drift > kMaxNormDrift) {
    std::ostringstream os;
    os << "evolution: norm drift " << drift << " exceeds " << kMaxNormDrift << " during " << where;
    throw NumericalError(os.str());
  }
}

}  // namespace

std::string to_string(Reversal reversal) {
  return reversal == Reversal::sign_flip ? "sign_flip" : "reversed_profile";
}

Reversal parse_reversal(const std::string& name) {
  if (name == "sign_flip") return Reversal::sign_flip;
  if (name == "reversed_profile") return Reversal::reversed_profile;
  throw ConfigError("protocol: unknown reversal mode '" + name + "'");
}

void ProtocolSchedule::validate() const {
  if (!(t0 > 0.0)) throw ConfigError("protocol: t0 must be > 0");
  if (t_pi && !(*t_pi >= 0.0)) throw ConfigError("protocol: t_pi must be >= 0");
  if (default_steps < 100) throw ConfigError("protocol: at least 100 ramp steps required");
  const double h = step();
  if (!(h > 0.0)) throw ConfigError("protocol: dt must be > 0");
  if (h > t0 / 100.0 * (1.0 + 1e-12)) throw ConfigError("protocol: dt must be <= t0/100");
  if (!(krylov.tolerance > 0.0)) throw ConfigError("protocol: tolerance must be > 0");
}

SectorTrajectory propagate_ramp(const BasisSet& basis, const ChainGeometry& geometry,
                                QubitSector sector, const DriveParams& params,
                                const ProtocolSchedule& schedule, Direction direction,
                                std::optional<ComplexVector> initial) {
  schedule.validate();
  DriveParams p = params;
  p.t0 = schedule.t0;
  const SectorHamiltonian sh(basis, geometry, sector, p);

  if (direction == Direction::reverse && !initial) {
    throw Error("evolution: reverse ramp needs an initial state");
  }
  ComplexVector psi = initial ? std::move(*initial) : vacuum_state(basis);
  if (psi.size() != basis.size()) throw Error("evolution: state does not match basis");
  const ComplexVector start = psi;
  const double norm0 = norm(psi);

  const auto steps = static_cast<long>(std::ceil(schedule.t0 / schedule.step() - 1e-9));
  const double dt = schedule.t0 / static_cast<double>(steps);
  SectorTrajectory out;
  KrylovPropagator propagator(schedule.krylov);
  for (long k = 0; k < steps; ++k) {
    const double s = (static_cast<double>(k) + 0.5) * dt;
    SparseHamiltonian h = [&] {
      if (direction == Direction::forward) return sh.at_time(s, +1);
      const int sign = schedule.reversal == Reversal::sign_flip ? -1 : +1;
      return sh.at_time(schedule.t0 - s, sign);
    }();
    out.substeps += propagator.propagate(h, psi, dt).substeps;
  }
  out.norm_drift = std::abs(norm(psi) - norm0);
  check_drift(out.norm_drift, "ramp");
  out.overlap_with_initial = inner(start, psi);
  out.final_state = std::move(psi);
  return out;
}

SectorTrajectory hold(ComplexVector state, const BasisSet& basis, const ChainGeometry& geometry,
                      QubitSector sector, const DriveParams& params, double at_time,
                      double duration, const KrylovOptions& options) {
  if (!(duration >= 0.0)) throw ConfigError("evolution: hold duration must be >= 0");
  if (state.size() != basis.size()) throw Error("evolution: state does not match basis");
  const SectorHamiltonian sh(basis, geometry, sector, params);
  const ComplexVector start = state;
  const double norm0 = norm(state);
  SectorTrajectory out;
  out.substeps = krylov_propagate(sh.at_time(at_time), state, duration, options).substeps;
  out.norm_drift = std::abs(norm(state) - norm0);
  check_drift(out.norm_drift, "hold");
  out.overlap_with_initial = inner(start, state);
  out.final_state = std::move(state);
  return out;
}

ProtocolResult run_protocol(const BasisSet& basis, const ChainGeometry& geometry,
                            const DriveParams& params, const ProtocolSchedule& schedule,
                            const ProtocolOptions& options) {
  schedule.validate();
  DriveParams p = params;
  p.t0 = schedule.t0;
  p.validate();

  ProtocolResult result;
  if (schedule.t_pi) {
    result.t_pi = *schedule.t_pi;
  } else {
    const auto e = interaction_energy(geometry, basis, p, p.t0, options.eigen, options.workers);
    if (std::abs(e.e_int) < 1e-12) {
      throw NumericalError("evolution: no effective interaction (|E_int| < 1e-12), t_pi undefined");
    }
    result.t_pi = kPi / std::abs(e.e_int);
    result.interaction = e;
  }
  result.t_g = 2.0 * p.t0 + result.t_pi;

  const std::size_t vac = basis.vacuum_index();
  parallel_for(4, options.workers, [&](std::size_t i) {
    const QubitSector sector = kAllSectors[i];
    auto up = propagate_ramp(basis, geometry, sector, p, schedule, Direction::forward);
    auto held = hold(std::move(up.final_state), basis, geometry, sector, p, p.t0, result.t_pi,
                     schedule.krylov);
    auto down = propagate_ramp(basis, geometry, sector, p, schedule, Direction::reverse,
                               std::move(held.final_state));
    SectorTrajectory& out = result.sectors[i];
    out.final_state = std::move(down.final_state);
    out.overlap_with_initial = out.final_state[vac];
    out.norm_drift = std::abs(norm(out.final_state) - 1.0);
    out.substeps = up.substeps + held.substeps + down.substeps;
    check_drift(out.norm_drift, "protocol");
  });
  return result;
}

}  // namespace dipolarbus
