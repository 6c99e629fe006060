// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "dipolarbus/numerics.hpp"
#include "generators.hpp"

using namespace dipolarbus;

TEST_CASE("shortest round-trip formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(0.0) == "0");
  testing::Gen gen(81);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.integer(-30, 30));
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("golden-section search") {
  const auto m = golden_section_minimize([](double x) { return (x - 1.3) * (x - 1.3) + 2.0; }, -5.0,
                                         5.0, 1e-10);
  CHECK(m.x == doctest::Approx(1.3).epsilon(1e-8));
  CHECK(m.f == doctest::Approx(2.0));
  CHECK(m.evaluations > 0);
  const auto edge = golden_section_minimize([](double x) { return x; }, 2.0, 3.0, 1e-12);
  CHECK(edge.x == doctest::Approx(2.0).epsilon(1e-9));
}
