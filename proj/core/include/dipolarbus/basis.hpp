// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file basis.hpp
 * @brief Many-body configuration space of the bus, complete or truncated.
 *
 * A configuration is an occupation bitmask: bit i set means site i is in
 * the excited (|up>) state. Configurations are stored in ascending bitmask
 * order; the all-down vacuum therefore always has index 0.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dipolarbus/geometry.hpp"

namespace dipolarbus {

using SpinConfig = std::uint64_t;

struct FullPolicy {};

/// At most n_max excitations, and no two excitations closer than r_cut.
struct TruncatedPolicy {
  int n_max = 0;
  double r_cut = 0.0;
};

using BasisPolicy = std::variant<FullPolicy, TruncatedPolicy>;

std::string describe(const BasisPolicy& policy);

/// Default guard against requests that cannot fit in memory.
inline constexpr std::size_t kDefaultMaxBasisDim = std::size_t{1} << 23;

/// Single-spin-flip connectivity in CSR layout: row k lists the indices of
/// the configurations reachable from config k by flipping one site.
struct FlipTable {
  std::vector<std::size_t> row_offsets;
  std::vector<std::uint32_t> columns;

  [[nodiscard]] std::span<const std::uint32_t> row(std::size_t k) const noexcept {
    return {columns.data() + row_offsets[k], columns.data() + row_offsets[k + 1]};
  }
  [[nodiscard]] std::size_t max_row_length() const noexcept;
};

class BasisSet {
 public:
  static BasisSet build(const ChainGeometry& geometry, const BasisPolicy& policy,
                        std::size_t max_dim = kDefaultMaxBasisDim);

  [[nodiscard]] std::size_t size() const noexcept { return impl_->configs.size(); }
  [[nodiscard]] int n_sites() const noexcept { return impl_->n_sites; }
  [[nodiscard]] std::span<const SpinConfig> configs() const noexcept { return impl_->configs; }
  [[nodiscard]] SpinConfig config(std::size_t index) const { return impl_->configs.at(index); }
  [[nodiscard]] std::optional<std::size_t> index_of(SpinConfig config) const noexcept;
  [[nodiscard]] std::size_t vacuum_index() const;
  [[nodiscard]] const BasisPolicy& policy() const noexcept { return impl_->policy; }
  [[nodiscard]] const FlipTable& flips() const noexcept { return impl_->flips; }
  [[nodiscard]] std::uint64_t geometry_fingerprint() const noexcept { return impl_->fingerprint; }
  [[nodiscard]] bool is_full() const noexcept {
    return std::holds_alternative<FullPolicy>(impl_->policy);
  }

  /// True if both sets are backed by the same storage or hold the same configurations.
  [[nodiscard]] bool same_as(const BasisSet& other) const noexcept;

 private:
  struct Impl {
    int n_sites = 0;
    BasisPolicy policy;
    std::uint64_t fingerprint = 0;
    std::vector<SpinConfig> configs;
    FlipTable flips;
  };

  explicit BasisSet(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// Number of configurations the policy admits on the given geometry,
/// counted without materialising them.
std::size_t count_configs(const ChainGeometry& geometry, const BasisPolicy& policy);

}  // namespace dipolarbus
