// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace dipolarbus {

using Eigen::Index;

namespace {

// exp_e1 is evaluated through an eigendecomposition, so its last component
// carries an absolute error of a few ulps; error estimates below this are noise.
double roundoff_floor(double beta) {
  return 64.0 * std::numeric_limits<double>::epsilon() * beta;
}

}  // namespace

struct KrylovPropagator::Workspace {
  Eigen::MatrixXcd v;
  Eigen::VectorXcd w;
  Eigen::VectorXcd coeff;
  Eigen::VectorXd diag;
  Eigen::VectorXd sub;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  /// Subspace size that covered the previous substep.
  int hint = 0;

  void resize(Index n, int mmax) {
    if (v.rows() != n || v.cols() != mmax) {
      v.resize(n, mmax);
      w.resize(n);
      coeff.resize(mmax);
      diag.resize(mmax);
      sub.resize(mmax);
      hint = 0;
    }
  }

  void decompose(int m) {
    es.computeFromTridiagonal(diag.head(m), sub.head(std::max(0, m - 1)));
  }

  /// exp(-i tau T) e_1 in the eigenbasis of the decomposed leading block.
  [[nodiscard]] Eigen::VectorXcd exp_e1(double tau) const {
    const auto& lambda = es.eigenvalues();
    const auto& q = es.eigenvectors();
    Eigen::VectorXcd c(lambda.size());
    for (Index j = 0; j < lambda.size(); ++j) c(j) = std::polar(q(0, j), -tau * lambda(j));
    return q.cast<Complex>() * c;
  }
};

KrylovPropagator::KrylovPropagator(KrylovOptions options)
    : options_(options), work_(std::make_unique<Workspace>()) {}
KrylovPropagator::~KrylovPropagator() = default;
KrylovPropagator::KrylovPropagator(KrylovPropagator&&) noexcept = default;
KrylovPropagator& KrylovPropagator::operator=(KrylovPropagator&&) noexcept = default;

KrylovStats KrylovPropagator::propagate(const SparseHamiltonian& h, ComplexVector& psi,
                                        double tau) {
  KrylovStats stats;
  if (tau < 0.0) throw Error("krylov: negative propagation time");
  if (tau == 0.0) return stats;
  const auto n = static_cast<Index>(h.dim());
  if (static_cast<Index>(psi.size()) != n) {
    throw Error("krylov: state dimension does not match Hamiltonian");
  }
  if (options_.max_dim < 1) throw Error("krylov: max_dim must be >= 1");

  const int mmax = static_cast<int>(std::min<Index>(options_.max_dim, n));
  // Once the subspace can fill a sizable part of the space, the three-term
  // recurrence loses orthogonality fast enough to fool the error estimate.
  const bool reorthogonalize = options_.full_reorthogonalization || n <= 4 * Index{mmax};
  Workspace& ws = *work_;
  ws.resize(n, mmax);
  auto& v = ws.v;
  auto& w = ws.w;
  Eigen::Map<Eigen::VectorXcd> state(psi.data(), n);

  double done = 0.0;
  double step = tau;
  while (done < tau) {
    const double remaining = tau - done;
    step = std::min(step, remaining);
    const double beta0 = state.norm();
    if (!(beta0 > 0.0)) throw NumericalError("krylov: zero state vector");
    v.col(0) = state / beta0;

    const int first_check = std::clamp(ws.hint - 2, std::min(4, mmax), mmax);
    double beta_last = 0.0;
    int m = 0;
    bool invariant = false;
    bool covered = false;
    for (int j = 0; j < mmax; ++j) {
      h.apply(std::span<const Complex>(v.col(j).data(), static_cast<std::size_t>(n)),
              std::span<Complex>(w.data(), static_cast<std::size_t>(n)));
      ++stats.matvecs;
      double alpha = 0.0;
      if (reorthogonalize) {
        // Classical Gram-Schmidt against the whole basis, applied twice.
        auto vj = v.leftCols(j + 1);
        for (int pass = 0; pass < 2; ++pass) {
          ws.coeff.head(j + 1).noalias() = vj.adjoint() * w;
          w.noalias() -= vj * ws.coeff.head(j + 1);
          alpha += ws.coeff(j).real();
        }
      } else {
        // Three-term recurrence; the exponential stays accurate without
        // global orthogonality of the Lanczos vectors.
        if (j > 0) w.noalias() -= ws.sub(j - 1) * v.col(j - 1);
        alpha = v.col(j).dot(w).real();
        w.noalias() -= alpha * v.col(j);
        const double correction = v.col(j).dot(w).real();
        w.noalias() -= correction * v.col(j);
        alpha += correction;
      }
      ws.diag(j) = alpha;
      const double beta = w.norm();
      m = j + 1;
      beta_last = beta;
      if (beta < 1e-12 * std::max(1.0, std::abs(alpha))) {
        invariant = true;
        break;
      }
      if (j + 1 < mmax) {
        ws.sub(j) = beta;
        v.col(j + 1) = w / beta;
      }
      // Adaptive subspace size: stop as soon as the remaining time is covered.
      if (m >= first_check && ((m - first_check) % 2 == 0 || m == mmax)) {
        ws.decompose(m);
        const double err = beta * std::abs(ws.exp_e1(remaining)(m - 1));
        if (err <= std::max(options_.tolerance * remaining, roundoff_floor(beta))) {
          step = remaining;
          covered = true;
          break;
        }
      }
    }
    if (!covered) ws.decompose(m);

    // Largest step whose local error estimate meets the per-unit-time budget.
    Eigen::VectorXcd y;
    double err = 0.0;
    if (invariant || covered) {
      y = ws.exp_e1(step);
      if (!invariant) err = beta_last * std::abs(y(m - 1));
    } else {
      for (;;) {
        y = ws.exp_e1(step);
        err = beta_last * std::abs(y(m - 1));
        if (err <= std::max(options_.tolerance * step, roundoff_floor(beta_last))) break;
        step *= 0.5;
        if (step < options_.min_substep_fraction * tau) {
          std::ostringstream os;
          os << "krylov: tolerance " << options_.tolerance << " unreachable (substep " << step
             << ", subspace " << m << ")";
          throw NumericalError(os.str());
        }
      }
    }
    ws.hint = m;
    state.noalias() = v.leftCols(m) * (beta0 * y);
    done += step;
    if (tau - done <= 1e-14 * tau) done = tau;
    stats.error_estimate += err;
    ++stats.substeps;
    // Let the next substep try a somewhat longer interval.
    step *= 1.5;
  }
  return stats;
}

KrylovStats krylov_propagate(const SparseHamiltonian& h, ComplexVector& psi, double tau,
                             const KrylovOptions& options) {
  KrylovPropagator propagator(options);
  return propagator.propagate(h, psi, tau);
}

}  // namespace dipolarbus
