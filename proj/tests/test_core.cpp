#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "dyncausal/core.hpp"
#include "dyncausal/rng.hpp"

using namespace dyncausal;

TEST_CASE("scale factor analytic values") {
  CHECK(scale_factor(Perturbation{0.0}) == 1.0);
  CHECK(scale_factor(Perturbation{std::numbers::ln2}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(scale_factor(Perturbation{-std::numbers::ln2}) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("scale factor is decreasing and multiplicative") {
  CounterRng rng(1, 50);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.next_uniform(-5, 5);
    const double b = rng.next_uniform(-5, 5);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (lo < hi) CHECK(scale_factor(Perturbation{lo}) > scale_factor(Perturbation{hi}));
    CHECK(std::abs(scale_factor(Perturbation{a}) * scale_factor(Perturbation{b}) -
                   scale_factor(Perturbation{a + b})) <= 1e-12 * std::max(1.0, scale_factor(Perturbation{a + b})));
  }
}

TEST_CASE("perturbation outside the clamp or non-finite is a domain error") {
  CHECK_THROWS_AS(scale_factor(Perturbation{10.5}), Error);
  CHECK_THROWS_AS(scale_factor(Perturbation{std::numeric_limits<double>::quiet_NaN()}), Error);
  CHECK_NOTHROW(scale_factor(Perturbation{-10.0}));
  try {
    scale_factor(Perturbation{11.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK(clamp_perturbation(25.0, 10.0).delta == 10.0);
  CHECK(clamp_perturbation(-25.0, 10.0).delta == -10.0);
}

TEST_CASE("loss examples") {
  CHECK(loss(StateVec{1, 2}, StateVec{1, 2}).epsilon == 0.0);
  CHECK(loss(StateVec{0}, StateVec{3}).epsilon == 9.0);
  const auto e = loss(StateVec{1, 3}, StateVec{2, 5});
  CHECK(e.epsilon == 2.5);
  CHECK(e.per_dim == std::vector<double>{1.0, 4.0});
}

TEST_CASE("loss is symmetric, non-negative and zero on equal inputs") {
  CounterRng rng(2, 50);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> a(3), b(3);
    for (auto& v : a) v = rng.next_uniform(-4, 4);
    for (auto& v : b) v = rng.next_uniform(-4, 4);
    const double ab = loss(StateVec(a), StateVec(b)).epsilon;
    CHECK(ab == loss(StateVec(b), StateVec(a)).epsilon);
    CHECK(ab >= 0.0);
    CHECK(loss(StateVec(a), StateVec(a)).epsilon == 0.0);
  }
}

TEST_CASE("loss rejects length mismatch") {
  try {
    loss(StateVec{1, 2}, StateVec{1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Dimension);
  }
}

TEST_CASE("transition validation") {
  Transition t{CausalTuple{StateVec{0}, ActionVec{1}, 0, {}}, 1, StateVec{1}};
  CHECK_NOTHROW(validate(t, 1, 1));
  CHECK_THROWS_AS(validate(t, 2, 1), Error);
  t.horizon = 0;
  CHECK_THROWS_AS(validate(t, 1, 1), Error);
}

TEST_CASE("number formatting") {
  CHECK(format_number(3.0) == "3");
  CHECK(format_number(3.5) == "3.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.0 / 3.0) == "0.333333");
  CHECK(format_number(1234567.0) == "1.23457e+06");
}
