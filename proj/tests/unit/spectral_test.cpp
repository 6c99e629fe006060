// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "dipolarbus/basis.hpp"
#include "dipolarbus/common.hpp"
#include "dipolarbus/hamiltonian.hpp"
#include "dipolarbus/spectral.hpp"
#include "generators.hpp"

using namespace dipolarbus;

namespace {

DriveParams reference_drive(double omega0 = 1.0) {
  DriveParams p;
  p.omega0 = omega0;
  p.delta0 = 2.3;
  p.t0 = 100.0;
  p.c_p = 100.0;
  p.p = 3;
  return p;
}

Eigen::VectorXd dense_spectrum(const SparseHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense(), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("two-level closed form") {
  const auto g = ChainGeometry::from_positions({0.0}, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const double omega = 0.6;
  const double delta = -0.8;
  const auto r = lowest_two(assemble(b, g, kSectorDD, omega, delta, reference_drive()));
  const double half = 0.5 * std::hypot(delta, omega);
  CHECK(r.e0 == doctest::Approx(-half).epsilon(1e-12));
  REQUIRE(r.has_e1);
  CHECK(r.e1 == doctest::Approx(half).epsilon(1e-12));
}

TEST_CASE("diagonal matrix returns its smallest entries") {
  const auto g = make_equidistant(6, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto h = assemble(b, g, kSectorUD, 0.0, 1.4, reference_drive());
  std::vector<double> d(h.diagonal().begin(), h.diagonal().end());
  std::sort(d.begin(), d.end());
  const auto r = lowest_two(h);
  CHECK(r.e0 == doctest::Approx(d[0]).epsilon(1e-12));
  CHECK(r.e1 == doctest::Approx(d[1]).epsilon(1e-12));
}

TEST_CASE("N=8 ramp end matches dense diagonalization in every sector") {
  const auto g = make_equidistant(8, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto p = reference_drive();
  for (auto sector : kAllSectors) {
    const SectorHamiltonian sh(b, g, sector, p);
    const auto h = sh.at_time(p.t0);
    const auto r = lowest_two(h);
    const auto ev = dense_spectrum(h);
    CHECK(std::abs(r.e0 - ev[0]) <= 1e-9);
    CHECK(std::abs(r.e1 - ev[1]) <= 1e-9);
  }
}

TEST_CASE("property: eigenpairs are normalised, ordered and meet the residual target") {
  testing::Gen gen(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = gen.integer(2, 9);
    const auto g = gen.geometry(n);
    const auto p = gen.drive();
    const auto b = BasisSet::build(g, gen.coin() ? BasisPolicy{FullPolicy{}} : BasisPolicy{TruncatedPolicy{gen.integer(1, n), gen.uniform(0.0, 1.5)}});
    if (b.size() < 2) continue;
    const auto h = assemble(b, g, gen.sector(), gen.uniform(0.05, 2.0), gen.uniform(-4.0, 4.0), p);
    EigenOptions opt;
    const auto r = lowest_two(h, opt);
    const auto ev = dense_spectrum(h);
    CHECK(r.e0 <= r.e1);
    CHECK(r.e0 == doctest::Approx(ev[0]).epsilon(1e-9).scale(std::max(1.0, std::abs(ev[0]))));
    CHECK(r.e1 == doctest::Approx(ev[1]).epsilon(1e-9).scale(std::max(1.0, std::abs(ev[1]))));
    double norm = 0.0;
    for (double v : r.psi0) norm += v * v;
    CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-12);
    CHECK(r.residual <= opt.tol * h.norm_estimate());
    const auto again = lowest_two(h, opt);
    CHECK(again.e0 == r.e0);
    CHECK(again.psi0 == r.psi0);
  }
}

TEST_CASE("one-dimensional problems have no first excited state") {
  const auto g = make_equidistant(3, 3.0);
  const auto b = BasisSet::build(g, TruncatedPolicy{0, 0.0});
  const auto r = lowest_two(assemble(b, g, kSectorDD, 1.0, 1.0, reference_drive()));
  CHECK(r.e0 == doctest::Approx(1.5));  // vacuum: +Delta/2 per site
  CHECK_FALSE(r.has_e1);
}

TEST_CASE("mirror-image sectors share their gap curves and energies") {
  const auto g = make_equidistant(8, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto p = reference_drive();
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(p.t0 * k / 10.0);
  const auto ud = gap_curve(SectorHamiltonian(b, g, kSectorUD, p), times);
  const auto du = gap_curve(SectorHamiltonian(b, g, kSectorDU, p), times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(ud[i] == doctest::Approx(du[i]).epsilon(1e-8));
  const auto e = interaction_energy(g, b, p);
  CHECK(e.e_ud == doctest::Approx(e.e_du).epsilon(1e-10));
  CHECK(e.e_int == e.e_uu - e.e_ud - e.e_du + e.e_dd);
}

TEST_CASE("weak drive gap follows the diagonal excitation cost") {
  const auto g = make_equidistant(6, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto p = reference_drive(1e-4);
  std::vector<double> times;
  for (int k = 0; k <= 12; ++k) times.push_back(p.t0 * k / 12.0);
  for (auto sector : kAllSectors) {
    const SectorHamiltonian sh(b, g, sector, p);
    const auto gaps = gap_curve(sh, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto h = assemble(b, g, sector, 0.0, ramp_delta(times[i], p), p);
      std::vector<double> d(h.diagonal().begin(), h.diagonal().end());
      std::sort(d.begin(), d.end());
      CHECK(std::abs(gaps[i] - (d[1] - d[0])) <= 1e-6);
    }
  }
}

TEST_CASE("a stronger drive opens the ramp-minimum gap") {
  const auto g = make_equidistant(6, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  GapOptions opt;
  opt.grid_points = 32;
  double previous = 0.0;
  for (double omega0 : {0.5, 1.0, 2.0}) {
    const auto r = min_gap_over_ramp(g, b, reference_drive(omega0), kAllSectors, opt);
    CHECK(r.gap > previous);
    CHECK(r.argmin_time >= 0.0);
    CHECK(r.argmin_time <= 100.0);
    CHECK_FALSE(r.degenerate);
    previous = r.gap;
  }
}

TEST_CASE("ramp-minimum gap never exceeds the gap on its own grid") {
  const auto g = make_equidistant(6, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto p = reference_drive();
  GapOptions opt;
  opt.grid_points = 16;
  const auto r = min_gap_over_ramp(g, b, p, kAllSectors, opt);
  std::vector<double> times;
  for (int k = 0; k < opt.grid_points; ++k) times.push_back(p.t0 * k / (opt.grid_points - 1));
  for (auto sector : kAllSectors) {
    for (double gap : gap_curve(SectorHamiltonian(b, g, sector, p), times)) CHECK(r.gap <= gap + 1e-12);
  }
}

TEST_CASE("interaction energy vanishes without a boundary coupling") {
  const auto g = make_equidistant(6, 1e6);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto e = interaction_energy(g, b, reference_drive());
  CHECK(std::abs(e.e_int) < 1e-12);
}

TEST_CASE("boundary excitations compress the crystal: E_int > 0") {
  DriveParams p = reference_drive();
  p.c_p = 30.0;
  const auto g10 = make_equidistant(10, 3.0);
  const auto e10 = interaction_energy(g10, BasisSet::build(g10, FullPolicy{}), p);
  CHECK(e10.e_int > 0.0);
}

TEST_CASE("property: enlarging a truncated basis never raises the ground energy") {
  testing::Gen gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(3, 10);
    const auto g = gen.geometry(n);
    const auto p = gen.drive();
    const auto sector = gen.sector();
    const int n_max = gen.integer(1, n - 1);
    const double r_cut = gen.uniform(0.0, 2.0);
    const auto small = BasisSet::build(g, TruncatedPolicy{n_max, r_cut});
    const auto large = BasisSet::build(g, TruncatedPolicy{n_max + 1, 0.5 * r_cut});
    const double omega = gen.uniform(0.1, 1.5);
    const double delta = gen.uniform(-1.0, 4.0);
    const auto e_small = lowest_two(assemble(small, g, sector, omega, delta, p)).e0;
    const auto e_large = lowest_two(assemble(large, g, sector, omega, delta, p)).e0;
    CHECK(e_large <= e_small + 1e-9 * std::max(1.0, std::abs(e_small)));
  }
}

TEST_CASE("hold-point analysis is consistent with the interaction energy") {
  const auto g = make_equidistant(7, 3.0);
  const auto b = BasisSet::build(g, FullPolicy{});
  const auto p = reference_drive();
  const auto hold = analyze_hold_point(g, b, p);
  const auto e = interaction_energy(g, b, p);
  CHECK(hold.energies.e_int == doctest::Approx(e.e_int).epsilon(1e-12));
  double smallest = 1e300;
  for (const auto& s : hold.sectors) smallest = std::min(smallest, s.e1 - s.e0);
  CHECK(hold.hold_gap == doctest::Approx(smallest));
  for (auto sector : kAllSectors) {
    CHECK(hold.energies.energy(sector) == hold.sectors[static_cast<std::size_t>(sector.index())].e0);
  }
}
