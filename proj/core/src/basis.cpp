// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/basis.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <sstream>

#include "dipolarbus/common.hpp"

namespace dipolarbus {

namespace {

constexpr int kMaxSites = 63;

void validate(const ChainGeometry& geometry, const BasisPolicy& policy) {
  if (geometry.n_sites() > kMaxSites) {
    throw ConfigError("basis: at most " + std::to_string(kMaxSites) + " sites supported");
  }
  if (const auto* t = std::get_if<TruncatedPolicy>(&policy)) {
    if (t->n_max < 0 || t->n_max > geometry.n_sites()) {
      throw ConfigError("basis: n_max must lie in [0, n_sites]");
    }
    if (!(t->r_cut >= 0.0)) throw ConfigError("basis: r_cut must be >= 0");
  }
}

// Depth-first walk over excited-site sets in increasing site order. Only the
// most recent excitation needs checking against r_cut because positions are sorted.
template <typename Visit>
void enumerate_truncated(const ChainGeometry& geometry, const TruncatedPolicy& policy,
                         Visit&& visit) {
  const int n = geometry.n_sites();
  const auto pos = geometry.positions();
  struct Frame {
    SpinConfig mask;
    int next_site;
    int last;
    int count;
  };
  std::vector<Frame> stack;
  stack.push_back({0, 0, -1, 0});
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    visit(f.mask);
    if (f.count == policy.n_max) continue;
    // Push in reverse so that lower sites are expanded first; order is irrelevant
    // for correctness because the result is sorted afterwards.
    for (int s = n - 1; s >= f.next_site; --s) {
      if (f.last >= 0 && pos[static_cast<std::size_t>(s)] - pos[static_cast<std::size_t>(f.last)] <
                             policy.r_cut) {
        continue;
      }
      stack.push_back({f.mask | (SpinConfig{1} << s), s + 1, s, f.count + 1});
    }
  }
}

}  // namespace

std::string describe(const BasisPolicy& policy) {
  if (std::holds_alternative<FullPolicy>(policy)) return "full";
  const auto& t = std::get<TruncatedPolicy>(policy);
  std::ostringstream os;
  os << "truncated(n_max=" << t.n_max << ", r_cut=" << t.r_cut << ")";
  return os.str();
}

std::size_t FlipTable::max_row_length() const noexcept {
  std::size_t best = 0;
  for (std::size_t k = 0; k + 1 < row_offsets.size(); ++k) {
    best = std::max(best, row_offsets[k + 1] - row_offsets[k]);
  }
  return best;
}

std::size_t count_configs(const ChainGeometry& geometry, const BasisPolicy& policy) {
  validate(geometry, policy);
  if (std::holds_alternative<FullPolicy>(policy)) {
    return std::size_t{1} << geometry.n_sites();
  }
  std::size_t count = 0;
  enumerate_truncated(geometry, std::get<TruncatedPolicy>(policy),
                      [&](SpinConfig) { ++count; });
  return count;
}

BasisSet BasisSet::build(const ChainGeometry& geometry, const BasisPolicy& policy,
                         std::size_t max_dim) {
  validate(geometry, policy);
  const int n = geometry.n_sites();
  auto impl = std::make_shared<Impl>();
  impl->n_sites = n;
  impl->policy = policy;
  impl->fingerprint = geometry.fingerprint();

  const std::size_t dim = count_configs(geometry, policy);
  if (dim > max_dim || dim > std::numeric_limits<std::uint32_t>::max()) {
    throw ConfigError("basis: dimension " + std::to_string(dim) + " exceeds the cap of " +
                      std::to_string(max_dim));
  }

  impl->configs.reserve(dim);
  if (std::holds_alternative<FullPolicy>(policy)) {
    for (SpinConfig c = 0; c < (SpinConfig{1} << n); ++c) impl->configs.push_back(c);
  } else {
    enumerate_truncated(geometry, std::get<TruncatedPolicy>(policy),
                        [&](SpinConfig c) { impl->configs.push_back(c); });
    std::sort(impl->configs.begin(), impl->configs.end());
  }

  BasisSet view{impl};
  auto& flips = impl->flips;
  flips.row_offsets.assign(dim + 1, 0);
  flips.columns.reserve(dim * static_cast<std::size_t>(std::max(1, n / 2)));
  for (std::size_t k = 0; k < dim; ++k) {
    const SpinConfig c = impl->configs[k];
    for (int s = 0; s < n; ++s) {
      if (auto j = view.index_of(c ^ (SpinConfig{1} << s))) {
        flips.columns.push_back(static_cast<std::uint32_t>(*j));
      }
    }
    flips.row_offsets[k + 1] = flips.columns.size();
  }
  flips.columns.shrink_to_fit();
  return BasisSet{std::move(impl)};
}

std::optional<std::size_t> BasisSet::index_of(SpinConfig config) const noexcept {
  const auto& configs = impl_->configs;
  if (std::holds_alternative<FullPolicy>(impl_->policy)) {
    if (config < configs.size()) return static_cast<std::size_t>(config);
    return std::nullopt;
  }
  const auto it = std::lower_bound(configs.begin(), configs.end(), config);
  if (it == configs.end() || *it != config) return std::nullopt;
  return static_cast<std::size_t>(it - configs.begin());
}

std::size_t BasisSet::vacuum_index() const {
  if (auto idx = index_of(0)) return *idx;
  throw Error("basis: vacuum configuration missing");
}

bool BasisSet::same_as(const BasisSet& other) const noexcept {
  return impl_ == other.impl_ ||
         (impl_->n_sites == other.impl_->n_sites && impl_->configs == other.impl_->configs);
}

}  // namespace dipolarbus
