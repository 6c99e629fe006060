// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "dipolarbus/numerics.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "dipolarbus/common.hpp"

namespace dipolarbus {

Minimum golden_section_minimize(const std::function<double(double)>& f, double lo, double hi,
                                double xtol, int max_iter) {
  if (!(hi >= lo)) throw Error("golden_section: empty interval");
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  Minimum m;
  m.evaluations = evals;
  if (fc <= fd) {
    m.x = c;
    m.f = fc;
  } else {
    m.x = d;
    m.f = fd;
  }
  // Endpoints are never probed by the interior points; check them explicitly.
  for (double x : {lo, hi}) {
    const double fx = f(x);
    ++m.evaluations;
    if (fx < m.f) {
      m.x = x;
      m.f = fx;
    }
  }
  return m;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

}  // namespace dipolarbus
