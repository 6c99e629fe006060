// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

namespace dipolarbus {

struct Minimum {
  double x = 0.0;
  double f = 0.0;
  int evaluations = 0;
};

/// Golden-section search for a minimum of a unimodal function on [lo, hi].
Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                double xtol, int max_iter = 1000);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double value);

}  // namespace dipolarbus
