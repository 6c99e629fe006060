// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>

#include "dipolarbus/common.hpp"
#include "dipolarbus/hamiltonian.hpp"

namespace dipolarbus {

struct KrylovOptions {
  /// Allowed propagation error per unit time.
  double tolerance = 1e-11;
  int max_dim = 40;
  /// Substeps shorter than this fraction of the requested time are a failure.
  double min_substep_fraction = 1e-10;
  /// Orthogonalise every Lanczos vector against the whole basis instead of
  /// using the plain three-term recurrence. Always on for spaces of at most
  /// 4 * max_dim states.
  bool full_reorthogonalization = false;
};

struct KrylovStats {
  int substeps = 0;
  int matvecs = 0;
  /// Sum of the a-posteriori local error estimates.
  double error_estimate = 0.0;
};

/// psi <- exp(-i H tau) psi by Lanczos-based exponential propagation with
/// adaptive subspace size and substepping. Throws NumericalError when the
/// tolerance cannot be met.
KrylovStats krylov_propagate(const SparseHamiltonian& h, ComplexVector& psi, double tau,
                             const KrylovOptions& options = {});

/// Reusable form of krylov_propagate for many consecutive steps: keeps its
/// workspace and starts the convergence checks near the subspace size that
/// sufficed for the previous step.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(KrylovOptions options = {});
  ~KrylovPropagator();
  KrylovPropagator(KrylovPropagator&&) noexcept;
  KrylovPropagator& operator=(KrylovPropagator&&) noexcept;
  KrylovPropagator(const KrylovPropagator&) = delete;
  KrylovPropagator& operator=(const KrylovPropagator&) = delete;

  KrylovStats propagate(const SparseHamiltonian& h, ComplexVector& psi, double tau);
  [[nodiscard]] const KrylovOptions& options() const noexcept { return options_; }

 private:
  struct Workspace;
  KrylovOptions options_;
  std::unique_ptr<Workspace> work_;
};

}  // namespace dipolarbus
