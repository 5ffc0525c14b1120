#include <doctest.h>

#include "properties.hpp"

TEST_CASE("covering net sandwich and monotonicity on randomized configurations") {
  const props::Outcome o = props::covering_sandwich(50, 20240501);
  CHECK(o.cases == 50);
  CHECK_MESSAGE(o.ok, o.detail);
}

TEST_CASE("profile monotonicity on the catalog") {
  const props::Outcome o = props::profile_monotonicity();
  CHECK_MESSAGE(o.ok, o.detail);
}

TEST_CASE("QR telescoping on the catalog") {
  const props::Outcome o = props::qr_telescoping();
  CHECK_MESSAGE(o.ok, o.detail);
  // Only f_lambda with lambda = 0.5 has a flat fiber branch.
  CHECK(o.skipped <= 2);
  CHECK(o.cases >= 18);
}

TEST_CASE("growth exponents are metric invariant") {
  const props::Outcome o = props::metric_invariance_suite();
  CHECK_MESSAGE(o.ok, o.detail);
}

TEST_CASE("same config, same CSV") {
  const props::Outcome o = props::determinism();
  CHECK_MESSAGE(o.ok, o.detail);
}
